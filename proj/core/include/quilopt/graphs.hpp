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

#ifndef QUILOPT_GRAPHS_HPP_
#define QUILOPT_GRAPHS_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "quilopt/ir.hpp"

namespace quilopt {

// Control-flow graph ---------------------------------------------------------

enum class BlockKind { QuantumOnly, ClassicalOnly, HybridControl };

std::string_view to_string(BlockKind kind);

struct BasicBlock {
  std::size_t id = 0;
  BlockKind kind = BlockKind::HybridControl;
  // Positions into Program::instructions.
  std::vector<std::size_t> instructions;
  std::optional<std::size_t> parallel_partner;
};

struct Cfg {
  std::vector<BasicBlock> blocks;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // The entry block; when it has a parallel partner both start together.
  std::optional<std::size_t> entry;
};

// Splits the program into device-homogeneous blocks. Classical and quantum
// instructions between two hybrid/control instructions form a pair of parallel
// blocks; runs of hybrid instructions form HybridControl blocks that end at
// jumps and before labels.
Cfg build_cfg(const Program& program);

// Segments and data-dependence graphs ----------------------------------------

enum class DdgRole { Start, Interior, Halt };

std::string_view to_string(DdgRole role);

// One straight-line piece of execution: from the program entry, a conditional
// jump target, or a conditional jump fall-through, up to and including the next
// conditional jump or HALT (or the end of the program). Labels are dropped and
// unconditional jumps are followed.
struct Segment {
  std::string id;
  DdgRole role = DdgRole::Halt;
  std::optional<std::string> entry_anchor;
  std::vector<Instruction> instructions;
  // Index into DdgSet::branches when the segment ends in a conditional jump.
  std::optional<std::size_t> exit_branch;

  // True when the last instruction is a conditional jump or HALT; such an
  // instruction is pinned to the end of every schedule of the segment.
  bool has_terminator() const;
  bool operator==(const Segment&) const = default;
};

// Where a conditional jump leads. A missing side means execution falls off the
// end of the program with no further instructions.
struct Branch {
  Instruction jump;
  std::optional<std::size_t> taken;
  std::optional<std::size_t> fallthrough;
  bool operator==(const Branch&) const = default;
};

struct DdgSet {
  std::vector<MemoryRegion> regions;
  std::set<std::string> readout;
  std::set<Qubit> qubits;
  // segments[0] is the start segment.
  std::vector<Segment> segments;
  std::vector<Branch> branches;

  const Segment& start() const { return segments.front(); }
  std::vector<std::size_t> halts() const;
  const MemoryRegion* find_region(std::string_view name) const;
  std::size_t instruction_count() const;

  bool operator==(const DdgSet&) const = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Traces every segment reachable from the program entry. Each conditional jump
// contributes its fall-through segment and its target segment once; a label
// targeted by k conditional jumps therefore starts k segments. Empty segments
// are omitted.
DdgSet build_ddgs(const Program& program);

// Re-emits a segment set as a program whose segmentation reproduces the same
// segments. Each segment body is laid out once and conditional jumps are
// routed through one stub per branch.
Program to_program(const DdgSet& ddgs);

struct Ddg {
  std::string id;
  DdgRole role = DdgRole::Halt;
  std::optional<std::string> entry_anchor;
  std::vector<Instruction> nodes;
  // preds[j] holds i when i must execute before j.
  std::vector<std::vector<std::size_t>> preds;
  std::vector<std::vector<std::size_t>> succs;
  bool pinned_terminator = false;

  std::size_t size() const { return nodes.size(); }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  void add_edge(std::size_t from, std::size_t to);
  // Strict ancestors of every node, as sorted index lists.
  std::vector<std::vector<std::size_t>> ancestors() const;
};

// Dependence graph of a segment: an edge i->j for every pair with a read/write
// conflict that is not implied through a third conflicting instruction.
Ddg build_ddg(const Segment& segment, const std::set<Qubit>& qubits);

// Topological order of the DDG with ties broken by node index (segment order).
// A pinned terminator is always last.
std::vector<std::size_t> linearize(const Ddg& ddg);

bool respects(const Ddg& ddg, const std::vector<std::size_t>& order);

std::string to_dot(const Cfg& cfg, const Program& program);
std::string to_dot(const Ddg& ddg);

}  // namespace quilopt

#endif  // QUILOPT_GRAPHS_HPP_
