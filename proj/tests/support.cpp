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

#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace quilopt::testing {

std::string fixture_path(std::string_view name) {
  return std::string(QUILOPT_FIXTURE_DIR) + "/" + std::string(name) + ".quil";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_fixture(std::string_view name) { return parse(read_file(fixture_path(name))); }

namespace {

class Generator {
 public:
  Generator(std::uint64_t seed, const RandomProgramOptions& options)
      : rng_(seed), options_(options) {}

  std::string run() {
    qubits_ = pick(1, options_.max_qubits);
    const unsigned body = pick(4, options_.max_instructions - 3);
    const unsigned jumps = pick(0, options_.max_conditional_jumps);

    std::vector<std::string> lines;
    for (unsigned i = 0; i < body; ++i) lines.push_back(instruction());

    // Each jump sits at some line and its label somewhere after it.
    std::map<unsigned, std::vector<std::string>> labels_before;
    std::map<unsigned, std::string> jumps_at;
    for (unsigned j = 0; j < jumps && body >= 2; ++j) {
      const unsigned at = pick(0, body - 2);
      if (jumps_at.contains(at)) continue;
      const unsigned to = pick(at + 1, body);
      const std::string label = "L" + std::to_string(j);
      const std::string kind = coin(0.5) ? "JUMP-WHEN" : "JUMP-UNLESS";
      jumps_at[at] = kind + " @" + label + " " + condition();
      labels_before[to].push_back("LABEL @" + label);
    }

    std::ostringstream out;
    out << "DECLARE ro BIT[3]\nDECLARE n INTEGER[2]\nDECLARE r REAL[2]\n";
    for (unsigned i = 0; i <= body; ++i) {
      for (const auto& l : labels_before[i]) out << l << "\n";
      if (i == body) break;
      out << lines[i] << "\n";
      if (auto it = jumps_at.find(i); it != jumps_at.end()) out << it->second << "\n";
    }
    return out.str();
  }

 private:
  unsigned pick(unsigned lo, unsigned hi) {
    return std::uniform_int_distribution<unsigned>(lo, hi)(rng_);
  }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T, std::size_t N>
  const T& choose(const T (&items)[N]) {
    return items[pick(0, N - 1)];
  }

  std::string qubit() { return std::to_string(pick(0, qubits_ - 1)); }
  std::string cell(const char* region, unsigned length) {
    return std::string(region) + "[" + std::to_string(pick(0, length - 1)) + "]";
  }
  std::string condition() { return coin(0.7) ? cell("ro", 3) : cell("n", 2); }

  std::string instruction() {
    const double roll = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (roll < 0.45) return gate();
    if (roll < 0.75) return classical();
    if (roll < 0.92) {
      if (coin(0.1)) return "MEASURE " + qubit();
      return "MEASURE " + qubit() + " " + (coin(0.8) ? cell("ro", 3) : cell("n", 2));
    }
    if (roll < 0.98) return coin(0.85) ? "RESET " + qubit() : "RESET";
    return "HALT";
  }

  std::string gate() {
    static const char* kSingle[] = {"H", "X", "Y", "Z", "S", "T", "I"};
    static const char* kRotations[] = {"RX", "RY", "RZ", "PHASE"};
    static const char* kAngles[] = {"0.5", "1.25", "-0.75", "3.0"};
    static const char* kTwo[] = {"CNOT", "CZ", "SWAP"};
    const unsigned kind = pick(0, 9);
    if (kind <= 4) return std::string(choose(kSingle)) + " " + qubit();
    if (kind == 5) return std::string(choose(kRotations)) + "(" + choose(kAngles) + ") " + qubit();
    if (kind == 6) return std::string(choose(kRotations)) + "(" + cell("r", 2) + ") " + qubit();
    if (qubits_ >= 3 && kind == 9) {
      std::vector<unsigned> qs;
      while (qs.size() < 3) {
        const unsigned q = pick(0, qubits_ - 1);
        if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
      }
      return "CCNOT " + std::to_string(qs[0]) + " " + std::to_string(qs[1]) + " " +
             std::to_string(qs[2]);
    }
    if (qubits_ >= 2) {
      const unsigned a = pick(0, qubits_ - 1);
      unsigned b = pick(0, qubits_ - 2);
      if (b >= a) ++b;
      return std::string(choose(kTwo)) + " " + std::to_string(a) + " " + std::to_string(b);
    }
    return std::string(choose(kSingle)) + " " + qubit();
  }

  std::string classical() {
    switch (pick(0, 2)) {
      case 0: {  // BIT
        const std::string dest = cell("ro", 3);
        const std::string src = coin(0.5) ? cell("ro", 3) : std::to_string(pick(0, 1));
        static const char* kOps[] = {"MOVE", "AND", "IOR", "XOR"};
        if (coin(0.15)) return "NOT " + dest;
        return std::string(choose(kOps)) + " " + dest + " " + src;
      }
      case 1: {  // INTEGER
        const std::string dest = cell("n", 2);
        if (coin(0.1)) return "NEG " + dest;
        if (coin(0.1)) return "EXCHANGE n[0] n[1]";
        if (coin(0.1)) {
          static const char* kDivisors[] = {"2", "-3", "5"};
          return "DIV " + dest + " " + choose(kDivisors);
        }
        static const char* kOps[] = {"MOVE", "ADD", "SUB", "MUL", "AND", "IOR", "XOR"};
        const unsigned s = pick(0, 2);
        const std::string src = s == 0   ? std::to_string(static_cast<int>(pick(0, 8)) - 3)
                                : s == 1 ? cell("n", 2)
                                         : cell("ro", 3);
        return std::string(choose(kOps)) + " " + dest + " " + src;
      }
      default: {  // REAL
        const std::string dest = cell("r", 2);
        if (coin(0.1)) return "NEG " + dest;
        if (coin(0.1)) return "EXCHANGE r[0] r[1]";
        if (coin(0.1)) {
          static const char* kDivisors[] = {"2.0", "0.5", "-4.0"};
          return "DIV " + dest + " " + choose(kDivisors);
        }
        static const char* kOps[] = {"MOVE", "ADD", "SUB", "MUL"};
        static const char* kLiterals[] = {"0.5", "1.5", "-2.0", "0.25"};
        const unsigned s = pick(0, 2);
        const std::string src = s == 0 ? std::string(choose(kLiterals))
                                : s == 1 ? cell("r", 2)
                                         : cell("n", 2);
        return std::string(choose(kOps)) + " " + dest + " " + src;
      }
    }
  }

  std::mt19937_64 rng_;
  RandomProgramOptions options_;
  unsigned qubits_ = 1;
};

}  // namespace

std::string random_program_text(std::uint64_t seed, const RandomProgramOptions& options) {
  return Generator(seed, options).run();
}

Program random_program(std::uint64_t seed, const RandomProgramOptions& options) {
  return parse(random_program_text(seed, options));
}

std::set<std::size_t> final_readout_writers(const Segment& segment, const DdgSet& ddgs) {
  std::set<std::size_t> out;
  std::set<CellId> seen;
  for (std::size_t p = segment.instructions.size(); p-- > 0;) {
    const Instruction& inst = segment.instructions[p];
    if (inst.is<Declare>()) continue;
    for (const auto& r : resources(inst, &ddgs.qubits).writes) {
      const auto* c = std::get_if<CellId>(&r);
      if (c == nullptr || !ddgs.readout.contains(c->region)) continue;
      if (seen.insert(*c).second) out.insert(p);
    }
  }
  return out;
}

}  // namespace quilopt::testing
