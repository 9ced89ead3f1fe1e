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

#ifndef QUILOPT_ANALYSES_HPP_
#define QUILOPT_ANALYSES_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quilopt/graphs.hpp"
#include "quilopt/ir.hpp"

namespace quilopt {

// The six single-qubit stabilizer states: |0>, |1>, |+>, |->, |i+>, |i->.
enum class PauliState { ZPlus, ZMinus, XPlus, XMinus, YPlus, YMinus };

inline constexpr std::array<PauliState, 6> kPauliStates = {
    PauliState::ZPlus, PauliState::ZMinus, PauliState::XPlus,
    PauliState::XMinus, PauliState::YPlus, PauliState::YMinus};

std::string_view to_string(PauliState state);

// Gates whose action on the six states is tracked.
bool is_tracked_clifford(std::string_view gate);

// The eigenstate equal, up to global phase, to gate|state>. Returns nullopt for
// gates outside {I, X, Y, Z, H, S}; callers treat the qubit as unknown.
std::optional<PauliState> pauli_transition(std::string_view gate, PauliState state);

// Facts at one program point. A cell or qubit absent from the map is Unknown.
struct AbstractState {
  std::map<CellId, double> cells;
  std::map<Qubit, PauliState> qubits;

  std::optional<double> cell(const CellId& id) const;
  std::optional<PauliState> qubit(Qubit q) const;
  bool operator==(const AbstractState&) const = default;
};

struct ConstantFacts {
  // before[i] holds the facts on entry to instruction i; before[size] is the
  // exit state.
  std::vector<AbstractState> before;
};

// Forward constant propagation over one segment. Qubits start in |0> only in
// the start segment; every other segment starts with nothing known.
ConstantFacts constant_propagation(const Segment& segment, const DdgSet& context);

// Applies one instruction's effect to `state`.
void propagate(AbstractState& state, const Instruction& inst, const DdgSet& context);

struct LivenessResult {
  // (position, cell) pairs whose value written at `position` is never read.
  std::set<std::pair<std::size_t, CellId>> dead_classical;
  // (position, qubit) pairs for qubits touched at `position` whose state no
  // longer reaches classical information.
  std::set<std::pair<std::size_t, Qubit>> dead_qubit;
  std::vector<std::set<CellId>> live_cells_after;
  std::vector<std::set<Qubit>> live_qubits_after;
};

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Backward liveness over a halt segment. Readout cells are read once more after
// the segment ends. A qubit stays alive while a later multi-qubit gate uses it
// or a later measurement of it stores a result, up to its next RESET. Throws
// AnalysisError for segments that do not end the program.
LivenessResult live_variables(const Segment& segment, const DdgSet& context);

struct HybridDependencies {
  // For each hybrid node, the nodes that must run before it and are not already
  // required by an earlier hybrid dependency. Sorted ascending.
  std::map<std::size_t, std::vector<std::size_t>> deps;
};

HybridDependencies find_hybrid_dependencies(const Ddg& ddg);

// Constant facts before every instruction of every segment, plus liveness for
// halt segments and hybrid dependencies, as JSON.
std::string dump_facts(const DdgSet& ddgs, int indent = 2);

}  // namespace quilopt

#endif  // QUILOPT_ANALYSES_HPP_
