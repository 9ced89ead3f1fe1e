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

#include "quilopt/analyses.hpp"

#include <algorithm>

#include <json.hpp>

namespace quilopt {

std::string_view to_string(PauliState state) {
  switch (state) {
    case PauliState::ZPlus: return "Z+";
    case PauliState::ZMinus: return "Z-";
    case PauliState::XPlus: return "X+";
    case PauliState::XMinus: return "X-";
    case PauliState::YPlus: return "Y+";
    case PauliState::YMinus: return "Y-";
  }
  return "?";
}

bool is_tracked_clifford(std::string_view gate) {
  return gate == "I" || gate == "X" || gate == "Y" || gate == "Z" || gate == "H" ||
         gate == "S";
}

std::optional<PauliState> pauli_transition(std::string_view gate, PauliState state) {
  using P = PauliState;
  // Rows follow kPauliStates order: Z+ Z- X+ X- Y+ Y-.
  static constexpr std::array<P, 6> kX = {P::ZMinus, P::ZPlus, P::XPlus, P::XMinus, P::YMinus, P::YPlus};
  static constexpr std::array<P, 6> kY = {P::ZMinus, P::ZPlus, P::XMinus, P::XPlus, P::YPlus, P::YMinus};
  static constexpr std::array<P, 6> kZ = {P::ZPlus, P::ZMinus, P::XMinus, P::XPlus, P::YMinus, P::YPlus};
  static constexpr std::array<P, 6> kH = {P::XPlus, P::XMinus, P::ZPlus, P::ZMinus, P::YMinus, P::YPlus};
  static constexpr std::array<P, 6> kS = {P::ZPlus, P::ZMinus, P::YPlus, P::YMinus, P::XMinus, P::XPlus};
  const auto row = static_cast<std::size_t>(state);
  if (gate == "I") return state;
  if (gate == "X") return kX[row];
  if (gate == "Y") return kY[row];
  if (gate == "Z") return kZ[row];
  if (gate == "H") return kH[row];
  if (gate == "S") return kS[row];
  return std::nullopt;
}

std::optional<double> AbstractState::cell(const CellId& id) const {
  auto it = cells.find(id);
  if (it == cells.end()) return std::nullopt;
  return it->second;
}

std::optional<PauliState> AbstractState::qubit(Qubit q) const {
  auto it = qubits.find(q);
  if (it == qubits.end()) return std::nullopt;
  return it->second;
}

namespace {

CellId cell_of(const MemoryRef& ref) { return CellId{ref.region, ref.index}; }

MemoryKind kind_of(const DdgSet& context, const std::string& region) {
  const MemoryRegion* r = context.find_region(region);
  return r != nullptr ? r->kind : MemoryKind::Real;
}

std::optional<double> value_of(const AbstractState& state, const Operand& op) {
  if (const auto* lit = std::get_if<Literal>(&op)) return lit->value;
  return state.cell(cell_of(std::get<MemoryRef>(op)));
}

void assign(AbstractState& state, const CellId& id, std::optional<double> value) {
  if (value) {
    state.cells[id] = *value;
  } else {
    state.cells.erase(id);
  }
}

}  // namespace

void propagate(AbstractState& state, const Instruction& inst, const DdgSet& context) {
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Declare>) {
          for (std::size_t k = 0; k < i.region.length; ++k) state.cells.erase(CellId{i.region.name, k});
        } else if constexpr (std::is_same_v<T, Gate>) {
          if (i.qubits.size() == 1 && !i.is_parameterized()) {
            if (auto s = state.qubit(i.qubits[0])) {
              if (auto next = pauli_transition(i.name, *s)) {
                state.qubits[i.qubits[0]] = *next;
                return;
              }
            }
          }
          for (Qubit q : i.qubits) state.qubits.erase(q);
        } else if constexpr (std::is_same_v<T, Classical>) {
          const MemoryRef& dest_ref = std::get<MemoryRef>(i.operands[0]);
          const CellId dest = cell_of(dest_ref);
          const MemoryKind kind = kind_of(context, dest_ref.region);
          if (i.op == Opcode::Exchange) {
            const MemoryRef& other_ref = std::get<MemoryRef>(i.operands[1]);
            const CellId other = cell_of(other_ref);
            auto a = state.cell(dest);
            auto b = state.cell(other);
            // Values cross regions and are coerced to the receiving kind.
            assign(state, dest, b ? std::optional(normalize(kind, *b)) : std::nullopt);
            assign(state, other,
                   a ? std::optional(normalize(kind_of(context, other_ref.region), *a)) : std::nullopt);
            return;
          }
          const auto dest_value = state.cell(dest);
          const std::optional<double> source =
              i.operands.size() > 1 ? value_of(state, i.operands[1]) : std::optional<double>(0.0);
          if (!source || (i.op != Opcode::Move && !dest_value)) {
            state.cells.erase(dest);
            return;
          }
          assign(state, dest, evaluate(i.op, kind, dest_value.value_or(0.0), *source));
        } else if constexpr (std::is_same_v<T, Measure>) {
          auto s = state.qubit(i.qubit);
          std::optional<double> outcome;
          if (s == PauliState::ZPlus) outcome = 0.0;
          if (s == PauliState::ZMinus) outcome = 1.0;
          if (!outcome) state.qubits.erase(i.qubit);
          if (i.target) {
            const MemoryKind kind = kind_of(context, i.target->region);
            assign(state, cell_of(*i.target),
                   outcome ? std::optional(normalize(kind, *outcome)) : std::nullopt);
          }
        } else if constexpr (std::is_same_v<T, Reset>) {
          if (i.qubit) {
            state.qubits[*i.qubit] = PauliState::ZPlus;
          } else {
            for (Qubit q : context.qubits) state.qubits[q] = PauliState::ZPlus;
          }
        }
      },
      inst.kind);
}

ConstantFacts constant_propagation(const Segment& segment, const DdgSet& context) {
  ConstantFacts facts;
  AbstractState state;
  if (segment.role == DdgRole::Start) {
    for (Qubit q : context.qubits) state.qubits[q] = PauliState::ZPlus;
  }
  facts.before.reserve(segment.instructions.size() + 1);
  for (const auto& inst : segment.instructions) {
    facts.before.push_back(state);
    propagate(state, inst, context);
  }
  facts.before.push_back(std::move(state));
  return facts;
}

LivenessResult live_variables(const Segment& segment, const DdgSet& context) {
  if (segment.exit_branch) {
    throw AnalysisError("liveness needs a halt segment; '" + segment.id + "' ends in a branch");
  }
  const auto& insts = segment.instructions;
  const std::size_t n = insts.size();
  LivenessResult result;
  result.live_cells_after.resize(n);
  result.live_qubits_after.resize(n);

  std::set<CellId> cells;
  for (const auto& name : context.readout) {
    if (const MemoryRegion* region = context.find_region(name)) {
      for (std::size_t k = 0; k < region->length; ++k) cells.insert(CellId{name, k});
    }
  }
  std::set<Qubit> qubits;

  for (std::size_t p = n; p-- > 0;) {
    result.live_cells_after[p] = cells;
    result.live_qubits_after[p] = qubits;
    const Instruction& inst = insts[p];
    const ResourceSets rs = resources(inst, &context.qubits);

    for (const auto& r : rs.writes) {
      if (const auto* c = std::get_if<CellId>(&r)) {
        if (!cells.contains(*c)) result.dead_classical.emplace(p, *c);
      } else {
        const Qubit q = std::get<QubitId>(r).index;
        if (!qubits.contains(q)) result.dead_qubit.emplace(p, q);
      }
    }

    for (const auto& r : rs.writes) {
      if (const auto* c = std::get_if<CellId>(&r)) cells.erase(*c);
    }
    for (const auto& r : rs.reads) {
      if (const auto* c = std::get_if<CellId>(&r)) cells.insert(*c);
    }

    if (const auto* g = std::get_if<Gate>(&inst.kind)) {
      if (g->qubits.size() > 1) qubits.insert(g->qubits.begin(), g->qubits.end());
    } else if (const auto* m = std::get_if<Measure>(&inst.kind)) {
      if (m->target) qubits.insert(m->qubit);
    } else if (const auto* reset = std::get_if<Reset>(&inst.kind)) {
      if (reset->qubit) {
        qubits.erase(*reset->qubit);
      } else {
        qubits.clear();
      }
    }
  }
  return result;
}

HybridDependencies find_hybrid_dependencies(const Ddg& ddg) {
  HybridDependencies out;
  const auto anc = ddg.ancestors();
  std::vector<bool> hybrid(ddg.size());
  for (std::size_t i = 0; i < ddg.size(); ++i) {
    hybrid[i] = classify(ddg.nodes[i]) == DeviceClass::Hybrid;
  }
  for (std::size_t h = 0; h < ddg.size(); ++h) {
    if (!hybrid[h]) continue;
    std::set<std::size_t> blocked;
    for (std::size_t a : anc[h]) {
      if (hybrid[a]) blocked.insert(anc[a].begin(), anc[a].end());
    }
    std::vector<std::size_t> deps;
    for (std::size_t a : anc[h]) {
      if (!blocked.contains(a)) deps.push_back(a);
    }
    out.deps.emplace(h, std::move(deps));
  }
  return out;
}

std::string dump_facts(const DdgSet& ddgs, int indent) {
  using nlohmann::json;
  Program ctx;
  ctx.regions = ddgs.regions;
  auto cell_name = [](const CellId& c) { return c.region + "[" + std::to_string(c.index) + "]"; };
  json out = json::array();
  for (const auto& segment : ddgs.segments) {
    const ConstantFacts facts = constant_propagation(segment, ddgs);
    json points = json::array();
    for (std::size_t p = 0; p < segment.instructions.size(); ++p) {
      json cells = json::object();
      for (const auto& [c, v] : facts.before[p].cells) cells[cell_name(c)] = v;
      json qubits = json::object();
      for (const auto& [q, s] : facts.before[p].qubits) qubits[std::to_string(q)] = to_string(s);
      points.push_back({{"position", p},
                        {"instruction", emit(segment.instructions[p], &ctx)},
                        {"constants", cells},
                        {"pauli", qubits}});
    }
    json seg = {{"id", segment.id}, {"points", points}};
    if (!segment.exit_branch) {
      const LivenessResult live = live_variables(segment, ddgs);
      json dead = json::array();
      for (const auto& [p, c] : live.dead_classical) dead.push_back({{"position", p}, {"cell", cell_name(c)}});
      for (const auto& [p, q] : live.dead_qubit) dead.push_back({{"position", p}, {"qubit", q}});
      seg["dead"] = std::move(dead);
    }
    const HybridDependencies deps = find_hybrid_dependencies(build_ddg(segment, ddgs.qubits));
    json hd = json::object();
    for (const auto& [h, d] : deps.deps) hd[std::to_string(h)] = d;
    seg["hybrid_dependencies"] = std::move(hd);
    out.push_back(std::move(seg));
  }
  return out.dump(indent);
}

}  // namespace quilopt
