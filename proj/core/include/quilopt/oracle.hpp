/*
 * Copyright 2026 The quilopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QUILOPT_ORACLE_HPP_
#define QUILOPT_ORACLE_HPP_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "quilopt/ir.hpp"

namespace quilopt {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  std::size_t max_steps = 10000;
  double prune_epsilon = 1e-12;
  std::size_t max_qubits = 10;
};

// Probability of every valuation of the readout cells. Keys list the cell
// values in the order of `cells`.
struct ReadoutDistribution {
  std::vector<CellId> cells;
  std::map<std::vector<double>, double> probabilities;
  // Mass lost to pruned branches or to the step limit.
  double truncated_mass = 0.0;

  double total() const;
  double probability(const std::vector<double>& valuation) const;
};

// Exhaustive interpreter: every measurement and single-qubit RESET splits the
// branch by the Born rule. Branches advance in lockstep and those that reach
// the same instruction with the same memory and the same state up to global
// phase are merged, which keeps repeat-until-success loops finite. Memory is
// zero-initialized.
ReadoutDistribution interpret(const Program& program, const OracleOptions& options = {});

// Half the L1 distance between two distributions over the same readout cells.
double total_variation(const ReadoutDistribution& a, const ReadoutDistribution& b);

struct Equivalence {
  bool equivalent = false;
  double distance = 0.0;
};

// Throws OracleError when the programs read out different cells.
Equivalence equivalent(const Program& a, const Program& b, double tolerance = 1e-9,
                       const OracleOptions& options = {});

std::string to_json(const ReadoutDistribution& dist, int indent = 2);

}  // namespace quilopt

#endif  // QUILOPT_ORACLE_HPP_
