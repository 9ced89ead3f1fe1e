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

#ifndef QUILOPT_TRANSFORMS_HPP_
#define QUILOPT_TRANSFORMS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quilopt/analyses.hpp"
#include "quilopt/graphs.hpp"
#include "quilopt/ir.hpp"

namespace quilopt {

struct Change {
  std::size_t position = 0;
  std::string description;
  bool operator==(const Change&) const = default;
};

struct TransformResult {
  Segment segment;
  std::vector<Change> log;
  // Problems noticed while transforming that left the code untouched.
  std::vector<Change> warnings;

  bool changed() const { return !log.empty(); }
};

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Substitutes constant operands with literals and collapses fully constant
// classical instructions into MOVEs. Divisions by zero are logged and left
// untouched. `facts` must come from constant_propagation on `segment`.
TransformResult constant_fold(const Segment& segment, const ConstantFacts& facts,
                              const DdgSet& context);

// Deletes instructions whose effects are all dead. DECLAREs survive when the
// region is read out or referenced anywhere in `context`.
TransformResult dead_code_elim(const Segment& segment, const LivenessResult& liveness,
                               const DdgSet& context);

// Schedules each hybrid instruction after its dependencies, filling the
// lagging device with independent executable work while the counts differ.
TransformResult reorder_instructions(const Segment& segment, const Ddg& ddg,
                                     const HybridDependencies& deps);

// Moves classical work with no quantum ancestry to the front and delays the
// quantum work that precedes the first hybrid instruction.
TransformResult latest_possible_quantum(const Segment& segment, const Ddg& ddg,
                                        const HybridDependencies& deps);

// An analysis immediately followed by the transform it feeds.
enum class PassPair { ConstPropFold, LivenessDce, HybridDepsReorder, HybridDepsLatestQuantum };

inline constexpr PassPair kAllPassPairs[] = {PassPair::ConstPropFold, PassPair::LivenessDce,
                                             PassPair::HybridDepsReorder,
                                             PassPair::HybridDepsLatestQuantum};

std::string_view to_string(PassPair pass);
std::optional<PassPair> pass_from_string(std::string_view name);
// Parses "a,b,c"; throws std::invalid_argument on an unknown name.
std::vector<PassPair> parse_pass_list(std::string_view list);

struct SegmentChange {
  std::string segment;
  PassPair pass = PassPair::ConstPropFold;
  Change change;
};

// Applies one pass pair to every segment. DCE skips segments that do not halt.
// Every reordered segment is checked against its DDG; a violation throws
// TransformError.
DdgSet apply_pass(const DdgSet& ddgs, PassPair pass, std::vector<SegmentChange>* log = nullptr);

DdgSet apply_passes(const DdgSet& ddgs, const std::vector<PassPair>& passes,
                    std::vector<SegmentChange>* log = nullptr);

}  // namespace quilopt

#endif  // QUILOPT_TRANSFORMS_HPP_
