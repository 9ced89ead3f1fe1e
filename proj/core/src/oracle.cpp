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

#include "quilopt/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <unordered_map>
#include <utility>

#include <json.hpp>

namespace quilopt {

namespace {

using Complex = std::complex<double>;
using Matrix2 = std::array<Complex, 4>;  // row-major

struct Branch {
  std::vector<Complex> amplitudes;
  std::vector<double> memory;
  double probability = 1.0;
  std::size_t pc = 0;
};

class Machine {
 public:
  Machine(const Program& program, const OracleOptions& options)
      : program_(program), options_(options) {
    for (const auto& region : program.regions) {
      offsets_[region.name] = {memory_size_, region.kind};
      memory_size_ += region.length;
    }
    for (Qubit q : program.qubits()) {
      const std::size_t k = qubit_index_.size();
      qubit_index_[q] = k;
    }
    if (qubit_index_.size() > options.max_qubits) {
      throw OracleError("program uses " + std::to_string(qubit_index_.size()) +
                        " qubits; the oracle supports at most " +
                        std::to_string(options.max_qubits));
    }
    for (std::size_t i = 0; i < program.instructions.size(); ++i) {
      if (const auto* l = std::get_if<Label>(&program.instructions[i].kind)) labels_[l->name] = i;
    }
    for (const auto& name : program.readout) {
      const MemoryRegion* region = program.find_region(name);
      if (region == nullptr) throw OracleError("readout region '" + name + "' is not declared");
      for (std::size_t k = 0; k < region->length; ++k) result_.cells.push_back(CellId{name, k});
    }
  }

  ReadoutDistribution run() {
    Branch root;
    root.amplitudes.assign(std::size_t{1} << qubit_index_.size(), Complex{});
    root.amplitudes[0] = 1.0;
    root.memory.assign(memory_size_, 0.0);
    std::vector<Branch> live;
    emit_branch(std::move(root), live);

    for (std::size_t step = 0; !live.empty(); ++step) {
      if (step >= options_.max_steps) {
        for (const auto& b : live) result_.truncated_mass += b.probability;
        break;
      }
      std::vector<Branch> next;
      for (auto& b : live) execute(std::move(b), next);
      live = merge(std::move(next));
    }
    return std::move(result_);
  }

 private:
  struct Slot {
    std::size_t offset;
    MemoryKind kind;
  };

  Slot slot(const MemoryRef& ref) const {
    auto it = offsets_.find(ref.region);
    if (it == offsets_.end()) throw OracleError("undeclared region '" + ref.region + "'");
    return {it->second.offset + ref.index, it->second.kind};
  }

  double read(const Branch& b, const Operand& op) const {
    if (const auto* lit = std::get_if<Literal>(&op)) return lit->value;
    return b.memory[slot(std::get<MemoryRef>(op)).offset];
  }

  void write(Branch& b, const MemoryRef& ref, double value) const {
    const Slot s = slot(ref);
    b.memory[s.offset] = normalize(s.kind, value);
  }

  void finish(const Branch& b) {
    std::vector<double> key;
    key.reserve(result_.cells.size());
    for (const auto& c : result_.cells) key.push_back(b.memory[slot(MemoryRef{c.region, c.index}).offset]);
    result_.probabilities[key] += b.probability;
  }

  void emit_branch(Branch&& b, std::vector<Branch>& out) {
    if (b.probability < options_.prune_epsilon) {
      result_.truncated_mass += b.probability;
      return;
    }
    if (b.pc >= program_.instructions.size()) {
      finish(b);
      return;
    }
    out.push_back(std::move(b));
  }

  std::size_t bit(Qubit q) const { return std::size_t{1} << qubit_index_.at(q); }

  static void apply1(std::vector<Complex>& amp, std::size_t mask, const Matrix2& m) {
    for (std::size_t i = 0; i < amp.size(); ++i) {
      if (i & mask) continue;
      const Complex a0 = amp[i];
      const Complex a1 = amp[i | mask];
      amp[i] = m[0] * a0 + m[1] * a1;
      amp[i | mask] = m[2] * a0 + m[3] * a1;
    }
  }

  // Applies m to `target` on the basis states where every control bit is set.
  static void apply_controlled(std::vector<Complex>& amp, std::size_t controls, std::size_t target,
                               const Matrix2& m) {
    for (std::size_t i = 0; i < amp.size(); ++i) {
      if ((i & target) || (i & controls) != controls) continue;
      const Complex a0 = amp[i];
      const Complex a1 = amp[i | target];
      amp[i] = m[0] * a0 + m[1] * a1;
      amp[i | target] = m[2] * a0 + m[3] * a1;
    }
  }

  static Matrix2 single_qubit_matrix(const std::string& name, double theta) {
    using std::numbers::pi;
    const Complex i{0.0, 1.0};
    const double r = 1.0 / std::numbers::sqrt2;
    if (name == "I") return {1, 0, 0, 1};
    if (name == "X") return {0, 1, 1, 0};
    if (name == "Y") return {0, -i, i, 0};
    if (name == "Z") return {1, 0, 0, -1};
    if (name == "H") return {r, r, r, -r};
    if (name == "S") return {1, 0, 0, i};
    if (name == "T") return {1, 0, 0, std::polar(1.0, pi / 4)};
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    if (name == "RX") return {c, -i * s, -i * s, c};
    if (name == "RY") return {c, -s, s, c};
    if (name == "RZ") return {std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)};
    if (name == "PHASE") return {1, 0, 0, std::polar(1.0, theta)};
    throw OracleError("no matrix for gate " + name);
  }

  void apply_gate(Branch& b, const Gate& g) const {
    const double theta = g.params.empty() ? 0.0 : read(b, g.params[0]);
    if (g.qubits.size() == 1) {
      apply1(b.amplitudes, bit(g.qubits[0]), single_qubit_matrix(g.name, theta));
    } else if (g.name == "CNOT") {
      apply_controlled(b.amplitudes, bit(g.qubits[0]), bit(g.qubits[1]), {0, 1, 1, 0});
    } else if (g.name == "CZ") {
      apply_controlled(b.amplitudes, bit(g.qubits[0]), bit(g.qubits[1]), {1, 0, 0, -1});
    } else if (g.name == "CCNOT") {
      apply_controlled(b.amplitudes, bit(g.qubits[0]) | bit(g.qubits[1]), bit(g.qubits[2]),
                       {0, 1, 1, 0});
    } else if (g.name == "SWAP") {
      const std::size_t m0 = bit(g.qubits[0]);
      const std::size_t m1 = bit(g.qubits[1]);
      for (std::size_t i = 0; i < b.amplitudes.size(); ++i) {
        if ((i & m0) && !(i & m1)) std::swap(b.amplitudes[i], b.amplitudes[(i & ~m0) | m1]);
      }
    } else {
      throw OracleError("no matrix for gate " + g.name);
    }
  }

  // Splits `b` on the value of qubit q; `on_outcome` adjusts each child.
  template <typename F>
  void split(const Branch& b, Qubit q, std::vector<Branch>& out, F on_outcome) {
    const std::size_t mask = bit(q);
    double p1 = 0.0;
    for (std::size_t i = 0; i < b.amplitudes.size(); ++i) {
      if (i & mask) p1 += std::norm(b.amplitudes[i]);
    }
    p1 = std::clamp(p1, 0.0, 1.0);
    const double p0 = 1.0 - p1;
    for (int outcome = 0; outcome < 2; ++outcome) {
      const double p = outcome ? p1 : p0;
      Branch child{{}, b.memory, b.probability * p, b.pc};
      if (child.probability < options_.prune_epsilon) {
        result_.truncated_mass += child.probability;
        continue;
      }
      child.amplitudes = b.amplitudes;
      const double scale = 1.0 / std::sqrt(p);
      for (std::size_t i = 0; i < child.amplitudes.size(); ++i) {
        const bool one = (i & mask) != 0;
        child.amplitudes[i] = one == static_cast<bool>(outcome) ? child.amplitudes[i] * scale : 0.0;
      }
      on_outcome(child, outcome);
      emit_branch(std::move(child), out);
    }
  }

  void execute(Branch&& b, std::vector<Branch>& out) {
    const Instruction& inst = program_.instructions[b.pc];
    ++b.pc;
    bool consumed = false;
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, Gate>) {
            apply_gate(b, i);
          } else if constexpr (std::is_same_v<T, Classical>) {
            const MemoryRef& dest = std::get<MemoryRef>(i.operands[0]);
            if (i.op == Opcode::Exchange) {
              const MemoryRef& other = std::get<MemoryRef>(i.operands[1]);
              const double a = read(b, dest);
              write(b, dest, read(b, other));
              write(b, other, a);
            } else {
              const double source = i.operands.size() > 1 ? read(b, i.operands[1]) : 0.0;
              auto value = evaluate(i.op, slot(dest).kind, read(b, dest), source);
              if (!value) {
                throw OracleError("division by zero at line " + std::to_string(inst.source_line));
              }
              write(b, dest, *value);
            }
          } else if constexpr (std::is_same_v<T, Measure>) {
            split(b, i.qubit, out, [&](Branch& child, int outcome) {
              if (i.target) write(child, *i.target, outcome);
            });
            consumed = true;
          } else if constexpr (std::is_same_v<T, Reset>) {
            if (!i.qubit) {
              std::fill(b.amplitudes.begin(), b.amplitudes.end(), Complex{});
              b.amplitudes[0] = 1.0;
            } else {
              const std::size_t mask = bit(*i.qubit);
              split(b, *i.qubit, out, [&](Branch& child, int outcome) {
                if (outcome) apply1(child.amplitudes, mask, {0, 1, 1, 0});
              });
              consumed = true;
            }
          } else if constexpr (std::is_same_v<T, Jump>) {
            b.pc = target(i.target);
          } else if constexpr (std::is_same_v<T, JumpWhen>) {
            if (read(b, i.condition) != 0.0) b.pc = target(i.target);
          } else if constexpr (std::is_same_v<T, JumpUnless>) {
            if (read(b, i.condition) == 0.0) b.pc = target(i.target);
          } else if constexpr (std::is_same_v<T, Halt>) {
            b.pc = program_.instructions.size();
          }
        },
        inst.kind);
    if (!consumed) emit_branch(std::move(b), out);
  }

  std::size_t target(const std::string& label) const {
    auto it = labels_.find(label);
    if (it == labels_.end()) throw OracleError("jump to undefined label @" + label);
    return it->second;
  }

  static bool same_up_to_phase(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex overlap{};
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
    return std::abs(overlap) > 1.0 - 1e-12;
  }

  static std::vector<Branch> merge(std::vector<Branch> branches) {
    std::map<std::pair<std::size_t, std::vector<double>>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      groups[{branches[i].pc, branches[i].memory}].push_back(i);
    }
    std::vector<Branch> out;
    out.reserve(branches.size());
    for (auto& [_, members] : groups) {
      const std::size_t first = out.size();
      for (std::size_t i : members) {
        bool merged = false;
        for (std::size_t k = first; k < out.size() && !merged; ++k) {
          if (same_up_to_phase(out[k].amplitudes, branches[i].amplitudes)) {
            out[k].probability += branches[i].probability;
            merged = true;
          }
        }
        if (!merged) out.push_back(std::move(branches[i]));
      }
    }
    return out;
  }

  const Program& program_;
  const OracleOptions& options_;
  std::map<std::string, Slot> offsets_;
  std::size_t memory_size_ = 0;
  std::map<Qubit, std::size_t> qubit_index_;
  std::unordered_map<std::string, std::size_t> labels_;
  ReadoutDistribution result_;
};

}  // namespace

double ReadoutDistribution::total() const {
  double sum = 0.0;
  for (const auto& [_, p] : probabilities) sum += p;
  return sum;
}

double ReadoutDistribution::probability(const std::vector<double>& valuation) const {
  auto it = probabilities.find(valuation);
  return it == probabilities.end() ? 0.0 : it->second;
}

ReadoutDistribution interpret(const Program& program, const OracleOptions& options) {
  if (options.max_steps == 0) throw OracleError("max-steps must be at least 1");
  return Machine(program, options).run();
}

double total_variation(const ReadoutDistribution& a, const ReadoutDistribution& b) {
  double sum = 0.0;
  for (const auto& [key, p] : a.probabilities) sum += std::abs(p - b.probability(key));
  for (const auto& [key, p] : b.probabilities) {
    if (!a.probabilities.contains(key)) sum += p;
  }
  return sum / 2.0;
}

Equivalence equivalent(const Program& a, const Program& b, double tolerance,
                       const OracleOptions& options) {
  const ReadoutDistribution da = interpret(a, options);
  const ReadoutDistribution db = interpret(b, options);
  if (da.cells != db.cells) throw OracleError("programs read out different cells");
  Equivalence e;
  e.distance = total_variation(da, db);
  e.equivalent = e.distance <= tolerance && da.truncated_mass <= tolerance &&
                 db.truncated_mass <= tolerance;
  return e;
}

std::string to_json(const ReadoutDistribution& dist, int indent) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : dist.cells) cells.push_back(c.region + "[" + std::to_string(c.index) + "]");
  j["cells"] = std::move(cells);
  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (const auto& [values, p] : dist.probabilities) {
    outcomes.push_back({{"values", values}, {"probability", p}});
  }
  j["distribution"] = std::move(outcomes);
  j["truncated_mass"] = dist.truncated_mass;
  return j.dump(indent);
}

}  // namespace quilopt
