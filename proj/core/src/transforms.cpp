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

#include "quilopt/transforms.hpp"

#include <algorithm>
#include <stdexcept>

namespace quilopt {

namespace {

Program emit_context(const DdgSet& ddgs) {
  Program p;
  p.regions = ddgs.regions;
  return p;
}

MemoryKind kind_of(const DdgSet& context, const std::string& region) {
  const MemoryRegion* r = context.find_region(region);
  return r != nullptr ? r->kind : MemoryKind::Real;
}

// Replaces a reference by its constant value, typed after the region it came from.
std::optional<Literal> constant_literal(const Operand& op, const AbstractState& state,
                                        const DdgSet& context) {
  const auto* ref = std::get_if<MemoryRef>(&op);
  if (ref == nullptr) return std::nullopt;
  auto value = state.cell(CellId{ref->region, ref->index});
  if (!value) return std::nullopt;
  return Literal{*value, is_integral(kind_of(context, ref->region))};
}

std::optional<double> operand_value(const Operand& op, const AbstractState& state) {
  if (const auto* lit = std::get_if<Literal>(&op)) return lit->value;
  const auto& ref = std::get<MemoryRef>(op);
  return state.cell(CellId{ref.region, ref.index});
}

std::string describe(const Instruction& before, const Instruction& after, const Program& ctx) {
  return emit(before, &ctx) + " -> " + emit(after, &ctx);
}

TransformResult finish_order(const Segment& segment, const Ddg& ddg,
                             const std::vector<std::size_t>& order, std::string_view pass,
                             const Program& ctx) {
  if (order.size() != segment.instructions.size() || !respects(ddg, order)) {
    throw TransformError(std::string(pass) + " produced an order that breaks a dependence in '" +
                         segment.id + "'");
  }
  TransformResult r{segment, {}, {}};
  r.segment.instructions.clear();
  for (std::size_t k = 0; k < order.size(); ++k) {
    r.segment.instructions.push_back(segment.instructions[order[k]]);
    if (order[k] != k) {
      r.log.push_back({k, emit(segment.instructions[order[k]], &ctx) + " moved from " +
                              std::to_string(order[k])});
    }
  }
  return r;
}

}  // namespace

TransformResult constant_fold(const Segment& segment, const ConstantFacts& facts,
                              const DdgSet& context) {
  if (facts.before.size() != segment.instructions.size() + 1) {
    throw std::invalid_argument("constant facts do not match segment '" + segment.id + "'");
  }
  const Program ctx = emit_context(context);
  TransformResult r{segment, {}, {}};
  for (std::size_t p = 0; p < segment.instructions.size(); ++p) {
    const Instruction& inst = segment.instructions[p];
    const AbstractState& state = facts.before[p];
    Instruction folded = inst;

    if (const auto* gate = std::get_if<Gate>(&inst.kind)) {
      Gate g = *gate;
      for (auto& param : g.params) {
        if (auto lit = constant_literal(param, state, context)) param = *lit;
      }
      folded.kind = std::move(g);
    } else if (const auto* c = std::get_if<Classical>(&inst.kind)) {
      if (c->op == Opcode::Exchange) continue;
      const auto& dest = std::get<MemoryRef>(c->operands[0]);
      const MemoryKind kind = kind_of(context, dest.region);
      const auto dest_value = state.cell(CellId{dest.region, dest.index});
      const std::optional<double> source =
          c->operands.size() > 1 ? operand_value(c->operands[1], state) : std::optional(0.0);
      const bool source_is_ref = c->operands.size() > 1 && is_ref(c->operands[1]);

      if (source && (c->op == Opcode::Move || dest_value)) {
        if (c->op == Opcode::Move && !source_is_ref) continue;
        auto result = evaluate(c->op, kind, dest_value.value_or(0.0), *source);
        if (!result) {
          r.warnings.push_back({p, "division by zero in " + emit(inst, &ctx) + "; left unfolded"});
          continue;
        }
        folded.kind = Classical{Opcode::Move, {dest, Literal{*result, is_integral(kind)}}};
      } else if (source_is_ref && source) {
        if (c->op == Opcode::Div && *source == 0.0) {
          r.warnings.push_back({p, "division by zero in " + emit(inst, &ctx) + "; left unfolded"});
          continue;
        }
        Classical sub = *c;
        sub.operands[1] = *constant_literal(c->operands[1], state, context);
        folded.kind = std::move(sub);
      }
    }

    if (!(folded == inst)) {
      r.log.push_back({p, describe(inst, folded, ctx)});
      r.segment.instructions[p] = std::move(folded);
    }
  }
  return r;
}

TransformResult dead_code_elim(const Segment& segment, const LivenessResult& liveness,
                               const DdgSet& context) {
  std::set<std::string> referenced(context.readout.begin(), context.readout.end());
  for (const auto& s : context.segments) {
    for (const auto& inst : s.instructions) {
      if (inst.is<Declare>()) continue;
      const ResourceSets rs = resources(inst);
      for (const auto* set : {&rs.reads, &rs.writes}) {
        for (const auto& res : *set) {
          if (const auto* c = std::get_if<CellId>(&res)) referenced.insert(c->region);
        }
      }
    }
  }

  const Program ctx = emit_context(context);
  auto cell_dead = [&](std::size_t p, const CellId& c) {
    return liveness.dead_classical.contains({p, c});
  };
  auto qubit_dead = [&](std::size_t p, Qubit q) { return liveness.dead_qubit.contains({p, q}); };

  TransformResult r{segment, {}, {}};
  r.segment.instructions.clear();
  for (std::size_t p = 0; p < segment.instructions.size(); ++p) {
    const Instruction& inst = segment.instructions[p];
    bool dead = false;
    if (const auto* d = std::get_if<Declare>(&inst.kind)) {
      dead = !referenced.contains(d->region.name);
    } else if (inst.is<Classical>()) {
      const ResourceSets rs = resources(inst);
      dead = std::all_of(rs.writes.begin(), rs.writes.end(), [&](const Resource& res) {
        return cell_dead(p, std::get<CellId>(res));
      });
    } else if (const auto* g = std::get_if<Gate>(&inst.kind)) {
      dead = std::all_of(g->qubits.begin(), g->qubits.end(),
                         [&](Qubit q) { return qubit_dead(p, q); });
    } else if (const auto* m = std::get_if<Measure>(&inst.kind)) {
      dead = qubit_dead(p, m->qubit) &&
             (!m->target || cell_dead(p, CellId{m->target->region, m->target->index}));
    }
    if (dead) {
      r.log.push_back({p, "removed " + emit(inst, &ctx)});
    } else {
      r.segment.instructions.push_back(inst);
    }
  }
  return r;
}

TransformResult reorder_instructions(const Segment& segment, const Ddg& ddg,
                                     const HybridDependencies& deps) {
  const std::size_t n = ddg.size();
  const auto anc = ddg.ancestors();
  const std::optional<std::size_t> pinned =
      ddg.pinned_terminator && n > 0 ? std::optional(n - 1) : std::nullopt;

  std::vector<std::size_t> relevant;
  for (const auto& [h, _] : deps.deps) {
    if (h != pinned) relevant.push_back(h);
  }
  if (n > 0 && (relevant.empty() || relevant.back() != n - 1)) relevant.push_back(n - 1);

  std::vector<bool> done(n, false);
  std::vector<std::size_t> order;
  auto push = [&](std::size_t i) {
    done[i] = true;
    order.push_back(i);
  };
  auto executable = [&](std::size_t i) {
    return !done[i] && std::all_of(ddg.preds[i].begin(), ddg.preds[i].end(),
                                   [&](std::size_t a) { return done[a]; });
  };

  for (std::size_t r : relevant) {
    if (done[r]) continue;
    long quantum = 0;
    long classical = 0;
    for (std::size_t a : anc[r]) {
      if (done[a]) continue;
      const DeviceClass dc = classify(ddg.nodes[a]);
      quantum += dc == DeviceClass::Quantum;
      classical += dc == DeviceClass::Classical;
      push(a);
    }
    while (quantum != classical) {
      const DeviceClass lagging = quantum > classical ? DeviceClass::Classical : DeviceClass::Quantum;
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < n && !pick; ++i) {
        if (i != r && i != pinned && executable(i) && classify(ddg.nodes[i]) == lagging) pick = i;
      }
      if (!pick) break;
      push(*pick);
      (lagging == DeviceClass::Quantum ? quantum : classical) += 1;
    }
    if (r == pinned) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!done[i] && i != r) push(i);
      }
    }
    push(r);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!done[i]) push(i);
  }
  return finish_order(segment, ddg, order, "reorder", Program{});
}

TransformResult latest_possible_quantum(const Segment& segment, const Ddg& ddg,
                                        const HybridDependencies& deps) {
  const std::size_t n = ddg.size();
  const auto anc = ddg.ancestors();
  const std::optional<std::size_t> pinned =
      ddg.pinned_terminator && n > 0 ? std::optional(n - 1) : std::nullopt;
  const std::size_t first_hybrid = deps.deps.empty() ? n : deps.deps.begin()->first;

  std::vector<bool> placed(n, false);
  std::vector<std::size_t> order;
  auto place = [&](std::size_t i) {
    placed[i] = true;
    order.push_back(i);
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (i == pinned || classify(ddg.nodes[i]) != DeviceClass::Classical) continue;
    const bool classical_only = std::all_of(anc[i].begin(), anc[i].end(), [&](std::size_t a) {
      return classify(ddg.nodes[a]) == DeviceClass::Classical;
    });
    if (classical_only) place(i);
  }

  // Remaining work ahead of the first hybrid instruction, classical first so
  // the quantum part starts as late as its dependences allow.
  for (bool progress = true; progress;) {
    progress = false;
    std::optional<std::size_t> pick;
    for (int pass = 0; pass < 2 && !pick; ++pass) {
      for (std::size_t i = 0; i < first_hybrid && i < n && !pick; ++i) {
        if (placed[i] || i == pinned) continue;
        const bool want_classical = pass == 0;
        if ((classify(ddg.nodes[i]) == DeviceClass::Classical) != want_classical) continue;
        if (std::all_of(ddg.preds[i].begin(), ddg.preds[i].end(),
                        [&](std::size_t a) { return placed[a]; })) {
          pick = i;
        }
      }
    }
    if (pick) {
      place(*pick);
      progress = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!placed[i] && i != pinned) place(i);
  }
  if (pinned) place(*pinned);
  return finish_order(segment, ddg, order, "latest-quantum", Program{});
}

std::string_view to_string(PassPair pass) {
  switch (pass) {
    case PassPair::ConstPropFold: return "const-prop-fold";
    case PassPair::LivenessDce: return "liveness-dce";
    case PassPair::HybridDepsReorder: return "hybrid-deps-reorder";
    case PassPair::HybridDepsLatestQuantum: return "hybrid-deps-latest-quantum";
  }
  return "?";
}

std::optional<PassPair> pass_from_string(std::string_view name) {
  for (PassPair p : kAllPassPairs) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<PassPair> parse_pass_list(std::string_view list) {
  std::vector<PassPair> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const std::string_view item = list.substr(0, comma);
    if (!item.empty()) {
      auto p = pass_from_string(item);
      if (!p) throw std::invalid_argument("unknown pass '" + std::string(item) + "'");
      out.push_back(*p);
    }
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

DdgSet apply_pass(const DdgSet& ddgs, PassPair pass, std::vector<SegmentChange>* log) {
  DdgSet out = ddgs;
  std::set<std::string> dropped_regions;
  for (std::size_t i = 0; i < out.segments.size(); ++i) {
    const Segment& segment = out.segments[i];
    TransformResult r;
    switch (pass) {
      case PassPair::ConstPropFold:
        r = constant_fold(segment, constant_propagation(segment, out), out);
        break;
      case PassPair::LivenessDce:
        if (segment.exit_branch) continue;
        r = dead_code_elim(segment, live_variables(segment, out), ddgs);
        break;
      case PassPair::HybridDepsReorder:
      case PassPair::HybridDepsLatestQuantum: {
        const Ddg ddg = build_ddg(segment, out.qubits);
        const HybridDependencies deps = find_hybrid_dependencies(ddg);
        r = pass == PassPair::HybridDepsReorder ? reorder_instructions(segment, ddg, deps)
                                                : latest_possible_quantum(segment, ddg, deps);
        break;
      }
    }
    if (pass == PassPair::LivenessDce) {
      for (const auto& inst : segment.instructions) {
        if (const auto* d = std::get_if<Declare>(&inst.kind)) dropped_regions.insert(d->region.name);
      }
      for (const auto& inst : r.segment.instructions) {
        if (const auto* d = std::get_if<Declare>(&inst.kind)) dropped_regions.erase(d->region.name);
      }
    }
    if (log != nullptr) {
      for (auto& c : r.log) log->push_back({segment.id, pass, std::move(c)});
    }
    out.segments[i] = std::move(r.segment);
  }
  if (!dropped_regions.empty()) {
    std::erase_if(out.regions, [&](const MemoryRegion& region) {
      if (!dropped_regions.contains(region.name)) return false;
      for (const auto& s : out.segments) {
        for (const auto& inst : s.instructions) {
          const auto* d = std::get_if<Declare>(&inst.kind);
          if (d != nullptr && d->region.name == region.name) return false;
        }
      }
      return true;
    });
  }
  return out;
}

DdgSet apply_passes(const DdgSet& ddgs, const std::vector<PassPair>& passes,
                    std::vector<SegmentChange>* log) {
  DdgSet out = ddgs;
  for (PassPair p : passes) out = apply_pass(out, p, log);
  return out;
}

}  // namespace quilopt
