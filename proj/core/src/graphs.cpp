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

#include "quilopt/graphs.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

#include "bitset.hpp"

namespace quilopt {

std::string_view to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::QuantumOnly: return "quantum";
    case BlockKind::ClassicalOnly: return "classical";
    case BlockKind::HybridControl: return "hybrid";
  }
  return "?";
}

std::string_view to_string(DdgRole role) {
  switch (role) {
    case DdgRole::Start: return "start";
    case DdgRole::Interior: return "interior";
    case DdgRole::Halt: return "halt";
  }
  return "?";
}

// CFG ------------------------------------------------------------------------

Cfg build_cfg(const Program& program) {
  Cfg cfg;
  std::vector<std::size_t> tails;
  std::vector<std::size_t> classical_run;
  std::vector<std::size_t> quantum_run;
  std::optional<std::size_t> open_hybrid;
  std::map<std::string, std::size_t> label_block;
  std::vector<std::pair<std::size_t, std::string>> jump_edges;

  auto new_block = [&](BlockKind kind, std::vector<std::size_t> insts) {
    const std::size_t id = cfg.blocks.size();
    cfg.blocks.push_back(BasicBlock{id, kind, std::move(insts), std::nullopt});
    return id;
  };
  auto enter = [&](const std::vector<std::size_t>& fresh) {
    for (std::size_t from : tails) {
      for (std::size_t to : fresh) cfg.edges.emplace_back(from, to);
    }
    tails = fresh;
  };
  auto flush = [&] {
    std::vector<std::size_t> fresh;
    if (!classical_run.empty()) fresh.push_back(new_block(BlockKind::ClassicalOnly, classical_run));
    if (!quantum_run.empty()) fresh.push_back(new_block(BlockKind::QuantumOnly, quantum_run));
    if (fresh.size() == 2) {
      cfg.blocks[fresh[0]].parallel_partner = fresh[1];
      cfg.blocks[fresh[1]].parallel_partner = fresh[0];
    }
    classical_run.clear();
    quantum_run.clear();
    if (!fresh.empty()) {
      enter(fresh);
      open_hybrid.reset();
    }
  };

  for (std::size_t pos = 0; pos < program.instructions.size(); ++pos) {
    const Instruction& inst = program.instructions[pos];
    switch (classify(inst)) {
      case DeviceClass::Classical:
        classical_run.push_back(pos);
        continue;
      case DeviceClass::Quantum:
        quantum_run.push_back(pos);
        continue;
      case DeviceClass::Hybrid:
        break;
    }
    flush();
    if (inst.is<Label>() || !open_hybrid) {
      const std::size_t id = new_block(BlockKind::HybridControl, {pos});
      enter({id});
      open_hybrid = id;
      if (inst.is<Label>()) label_block[inst.as<Label>().name] = id;
    } else {
      cfg.blocks[*open_hybrid].instructions.push_back(pos);
    }
    if (inst.is<Jump>() || inst.is<Halt>() || inst.is_conditional_jump()) {
      const std::size_t id = *open_hybrid;
      if (inst.is<Jump>()) jump_edges.emplace_back(id, inst.as<Jump>().target);
      if (inst.is<JumpWhen>()) jump_edges.emplace_back(id, inst.as<JumpWhen>().target);
      if (inst.is<JumpUnless>()) jump_edges.emplace_back(id, inst.as<JumpUnless>().target);
      open_hybrid.reset();
      if (inst.is<Jump>() || inst.is<Halt>()) {
        tails.clear();
      } else {
        tails = {id};
      }
    }
  }
  flush();
  for (const auto& [from, label] : jump_edges) {
    cfg.edges.emplace_back(from, label_block.at(label));
  }
  if (!cfg.blocks.empty()) cfg.entry = 0;
  return cfg;
}

// Segments -------------------------------------------------------------------

bool Segment::has_terminator() const {
  if (instructions.empty()) return false;
  const Instruction& last = instructions.back();
  return last.is_conditional_jump() || last.is<Halt>();
}

std::vector<std::size_t> DdgSet::halts() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!segments[i].exit_branch) out.push_back(i);
  }
  return out;
}

const MemoryRegion* DdgSet::find_region(std::string_view name) const {
  for (const auto& region : regions) {
    if (region.name == name) return &region;
  }
  return nullptr;
}

std::size_t DdgSet::instruction_count() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.instructions.size();
  return n;
}

namespace {

const std::string& jump_target(const Instruction& inst) {
  if (inst.is<JumpWhen>()) return inst.as<JumpWhen>().target;
  return inst.as<JumpUnless>().target;
}

struct Trace {
  std::vector<Instruction> instructions;
  std::optional<std::size_t> conditional_jump;  // program position
};

}  // namespace

DdgSet build_ddgs(const Program& program) {
  const auto& insts = program.instructions;
  std::map<std::string, std::size_t> label_pos;
  for (std::size_t pos = 0; pos < insts.size(); ++pos) {
    if (insts[pos].is<Label>()) label_pos[insts[pos].as<Label>().name] = pos;
  }
  auto resolve = [&](const std::string& label) {
    auto it = label_pos.find(label);
    if (it == label_pos.end()) throw GraphError("jump to undefined label '@" + label + "'");
    return it->second;
  };

  auto trace = [&](std::size_t pos) {
    Trace out;
    std::set<std::size_t> visited_labels;
    while (pos < insts.size()) {
      const Instruction& inst = insts[pos];
      if (inst.is<Label>()) {
        ++pos;
      } else if (inst.is<Jump>()) {
        pos = resolve(inst.as<Jump>().target);
        if (!visited_labels.insert(pos).second) {
          throw GraphError("unconditional jump cycle through '@" + inst.as<Jump>().target + "'");
        }
      } else if (inst.is_conditional_jump()) {
        out.instructions.push_back(inst);
        out.conditional_jump = pos;
        break;
      } else if (inst.is<Halt>()) {
        out.instructions.push_back(inst);
        break;
      } else {
        out.instructions.push_back(inst);
        ++pos;
      }
    }
    return out;
  };

  DdgSet ddgs;
  ddgs.regions = program.regions;
  ddgs.readout = program.readout;
  ddgs.qubits = program.qubits();

  std::map<std::size_t, std::size_t> branch_of_jump;
  std::deque<std::size_t> pending;
  auto attach = [&](Segment& segment, const Trace& t) {
    if (!t.conditional_jump) return;
    auto [it, fresh] = branch_of_jump.try_emplace(*t.conditional_jump, ddgs.branches.size());
    if (fresh) {
      ddgs.branches.push_back(Branch{insts[*t.conditional_jump], std::nullopt, std::nullopt});
      pending.push_back(*t.conditional_jump);
    }
    segment.exit_branch = it->second;
  };

  Trace entry = trace(0);
  Segment start{"start", DdgRole::Start, std::nullopt, entry.instructions, std::nullopt};
  attach(start, entry);
  ddgs.segments.push_back(std::move(start));

  while (!pending.empty()) {
    const std::size_t jump_pos = pending.front();
    pending.pop_front();
    const std::size_t branch = branch_of_jump.at(jump_pos);
    const std::string& label = jump_target(insts[jump_pos]);
    for (bool taken : {false, true}) {
      Trace t = trace(taken ? resolve(label) : jump_pos + 1);
      if (t.instructions.empty()) continue;
      Segment segment;
      segment.instructions = std::move(t.instructions);
      if (taken) segment.entry_anchor = label;
      attach(segment, t);
      segment.role = segment.exit_branch ? DdgRole::Interior : DdgRole::Halt;
      const std::size_t index = ddgs.segments.size();
      ddgs.segments.push_back(std::move(segment));
      (taken ? ddgs.branches[branch].taken : ddgs.branches[branch].fallthrough) = index;
    }
  }

  std::size_t interior = 0;
  std::size_t halt = 0;
  for (std::size_t i = 1; i < ddgs.segments.size(); ++i) {
    Segment& s = ddgs.segments[i];
    s.id = s.role == DdgRole::Interior ? "interior" + std::to_string(++interior)
                                       : "halt" + std::to_string(++halt);
  }
  return ddgs;
}

Program to_program(const DdgSet& ddgs) {
  Program program;
  auto& out = program.instructions;
  std::set<std::string> declared;
  auto segment_label = [&](std::optional<std::size_t> segment) {
    return segment ? "seg_" + ddgs.segments[*segment].id : std::string("end");
  };
  for (std::size_t i = 0; i < ddgs.segments.size(); ++i) {
    const Segment& segment = ddgs.segments[i];
    if (i != 0) out.push_back(Instruction{Label{segment_label(i)}});
    std::size_t body = segment.instructions.size();
    if (segment.exit_branch) --body;
    for (std::size_t k = 0; k < body; ++k) {
      const Instruction& inst = segment.instructions[k];
      if (inst.is<Declare>() && !declared.insert(inst.as<Declare>().region.name).second) continue;
      out.push_back(inst);
    }
    if (segment.exit_branch) {
      out.push_back(Instruction{Jump{"branch_" + std::to_string(*segment.exit_branch)}});
    } else if (!segment.has_terminator()) {
      out.push_back(Instruction{Jump{"end"}});
    }
  }
  for (std::size_t b = 0; b < ddgs.branches.size(); ++b) {
    const Branch& branch = ddgs.branches[b];
    out.push_back(Instruction{Label{"branch_" + std::to_string(b)}});
    Instruction jump = branch.jump;
    if (jump.is<JumpWhen>()) {
      jump.as<JumpWhen>().target = segment_label(branch.taken);
    } else {
      jump.as<JumpUnless>().target = segment_label(branch.taken);
    }
    out.push_back(std::move(jump));
    out.push_back(Instruction{Jump{segment_label(branch.fallthrough)}});
  }
  out.push_back(Instruction{Label{"end"}});
  if (out.size() >= 2 && out[out.size() - 2].is<Jump>() && out[out.size() - 2].as<Jump>().target == "end") {
    out.erase(out.end() - 2);
  }
  const bool end_used = std::any_of(out.begin(), out.end(), [](const Instruction& inst) {
    if (inst.is<Jump>()) return inst.as<Jump>().target == "end";
    if (inst.is<JumpWhen>()) return inst.as<JumpWhen>().target == "end";
    if (inst.is<JumpUnless>()) return inst.as<JumpUnless>().target == "end";
    return false;
  });
  if (!end_used) out.pop_back();
  for (std::size_t line = 0; line < out.size(); ++line) out[line].source_line = line + 1;

  for (const auto& inst : out) {
    if (inst.is<Declare>()) program.regions.push_back(inst.as<Declare>().region);
  }
  for (const auto& name : ddgs.readout) {
    if (program.find_region(name) != nullptr) program.readout.insert(name);
  }
  validate(program);
  return program;
}

// DDG ------------------------------------------------------------------------

void Ddg::add_edge(std::size_t from, std::size_t to) {
  succs[from].push_back(to);
  preds[to].push_back(from);
}

std::vector<std::pair<std::size_t, std::size_t>> Ddg::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < succs.size(); ++i) {
    for (std::size_t j : succs[i]) out.emplace_back(i, j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::size_t>> Ddg::ancestors() const {
  const std::size_t n = size();
  std::vector<detail::Bitset> bits(n, detail::Bitset(n));
  for (std::size_t j : linearize(*this)) {
    for (std::size_t i : preds[j]) {
      bits[j].set(i);
      bits[j] |= bits[i];
    }
  }
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (bits[j].test(i)) out[j].push_back(i);
    }
  }
  return out;
}

Ddg build_ddg(const Segment& segment, const std::set<Qubit>& qubits) {
  Ddg ddg;
  ddg.id = segment.id;
  ddg.role = segment.role;
  ddg.entry_anchor = segment.entry_anchor;
  ddg.nodes = segment.instructions;
  ddg.pinned_terminator = segment.has_terminator();
  const std::size_t n = ddg.nodes.size();
  ddg.preds.assign(n, {});
  ddg.succs.assign(n, {});

  std::vector<ResourceSets> rs;
  rs.reserve(n);
  for (const auto& inst : ddg.nodes) rs.push_back(resources(inst, &qubits));

  std::vector<detail::Bitset> anc(n, detail::Bitset(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::size_t> direct;
    for (std::size_t i = 0; i < j; ++i) {
      if (conflicts(rs[i], rs[j])) direct.push_back(i);
    }
    // i -> j survives unless i already reaches another direct predecessor.
    for (std::size_t i : direct) {
      bool implied = false;
      for (std::size_t k : direct) {
        if (k != i && anc[k].test(i)) {
          implied = true;
          break;
        }
      }
      if (!implied) ddg.add_edge(i, j);
      anc[j].set(i);
      anc[j] |= anc[i];
    }
  }
  return ddg;
}

std::vector<std::size_t> linearize(const Ddg& ddg) {
  const std::size_t n = ddg.size();
  const std::optional<std::size_t> pinned =
      ddg.pinned_terminator && n > 0 ? std::optional<std::size_t>(n - 1) : std::nullopt;
  std::vector<std::size_t> indegree(n);
  for (std::size_t j = 0; j < n; ++j) indegree[j] = ddg.preds[j].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t j = 0; j < n; ++j) {
    if (indegree[j] == 0 && j != pinned) ready.push(j);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  bool pinned_ready = pinned && indegree[*pinned] == 0;
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t j : ddg.succs[i]) {
      if (--indegree[j] == 0) {
        if (j == pinned) {
          pinned_ready = true;
        } else {
          ready.push(j);
        }
      }
    }
  }
  if (pinned && pinned_ready) order.push_back(*pinned);
  if (order.size() != n) throw GraphError("dependence graph '" + ddg.id + "' has a cycle");
  return order;
}

bool respects(const Ddg& ddg, const std::vector<std::size_t>& order) {
  const std::size_t n = ddg.size();
  if (order.size() != n) return false;
  std::vector<std::size_t> position(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (order[k] >= n || position[order[k]] != n) return false;
    position[order[k]] = k;
  }
  for (const auto& [i, j] : ddg.edges()) {
    if (position[i] >= position[j]) return false;
  }
  return !ddg.pinned_terminator || n == 0 || order.back() == n - 1;
}

// DOT ------------------------------------------------------------------------

namespace {

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_dot(const Cfg& cfg, const Program& program) {
  std::ostringstream out;
  out << "digraph cfg {\n";
  if (!cfg.blocks.empty()) out << "  node [shape=box];\n";
  for (const auto& block : cfg.blocks) {
    std::string label;
    for (std::size_t pos : block.instructions) {
      if (!label.empty()) label += "\\n";
      label += emit(program.instructions[pos], &program);
    }
    out << "  b" << block.id << " [label=" << quote(label)
        << ", kind=" << quote(to_string(block.kind)) << "];\n";
  }
  for (const auto& [from, to] : cfg.edges) out << "  b" << from << " -> b" << to << ";\n";
  for (const auto& block : cfg.blocks) {
    if (block.parallel_partner && *block.parallel_partner > block.id) {
      out << "  b" << block.id << " -> b" << *block.parallel_partner
          << " [style=dashed, dir=none, constraint=false];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const Ddg& ddg) {
  std::ostringstream out;
  out << "digraph " << quote(ddg.id) << " {\n";
  if (ddg.size() > 0) out << "  node [shape=box];\n";
  for (std::size_t i = 0; i < ddg.size(); ++i) {
    out << "  n" << i << " [label=" << quote(emit(ddg.nodes[i]))
        << ", kind=" << quote(to_string(classify(ddg.nodes[i]))) << "];\n";
  }
  for (const auto& [from, to] : ddg.edges()) out << "  n" << from << " -> n" << to << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace quilopt
