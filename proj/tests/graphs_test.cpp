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

#include <gtest/gtest.h>

#include <cctype>
#include <random>

#include "quilopt/graphs.hpp"
#include "support.hpp"

namespace quilopt {
namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

std::vector<std::string> node_text(const Ddg& ddg, const Program& context) {
  std::vector<std::string> out;
  for (const auto& n : ddg.nodes) out.push_back(emit(n, &context));
  return out;
}

TEST(BuildDdgs, BranchExampleGivesThreeGraphs) {
  const Program p = parse(testing::kBranchExample);
  const DdgSet ddgs = build_ddgs(p);
  ASSERT_EQ(ddgs.segments.size(), 3u);

  const Ddg start = build_ddg(ddgs.segments[0], ddgs.qubits);
  EXPECT_EQ(start.role, DdgRole::Start);
  EXPECT_EQ(node_text(start, p),
            (std::vector<std::string>{"DECLARE m BIT", "H 0", "MEASURE 0 m", "JUMP-WHEN @label m"}));
  EXPECT_EQ(start.edges(), (Edges{{0, 2}, {1, 2}, {2, 3}}));

  const Ddg fall = build_ddg(ddgs.segments[1], ddgs.qubits);
  EXPECT_EQ(fall.role, DdgRole::Halt);
  EXPECT_EQ(node_text(fall, p), (std::vector<std::string>{"Y 0", "Z 0", "MEASURE 0 m"}));
  EXPECT_EQ(fall.edges(), (Edges{{0, 1}, {1, 2}}));

  const Ddg taken = build_ddg(ddgs.segments[2], ddgs.qubits);
  EXPECT_EQ(taken.role, DdgRole::Halt);
  EXPECT_EQ(taken.entry_anchor, "label");
  EXPECT_EQ(node_text(taken, p), (std::vector<std::string>{"Z 0", "MEASURE 0 m"}));
  EXPECT_EQ(taken.edges(), (Edges{{0, 1}}));
}

TEST(BuildDdgs, SharedTargetStartsOneSegmentPerJump) {
  const DdgSet ddgs = build_ddgs(parse(
      "DECLARE m BIT[2]\n"
      "MEASURE 0 m[0]\n"
      "JUMP-WHEN @t m[0]\n"
      "MEASURE 1 m[1]\n"
      "JUMP-WHEN @t m[1]\n"
      "X 0\n"
      "LABEL @t\n"
      "Z 0\n"));
  // start, (fall1, taken1) from the first jump, (fall2, taken2) from the second.
  ASSERT_EQ(ddgs.segments.size(), 5u);
  EXPECT_EQ(ddgs.branches.size(), 2u);
  std::size_t starting_at_t = 0;
  for (const auto& s : ddgs.segments) starting_at_t += s.entry_anchor == "t";
  EXPECT_EQ(starting_at_t, 2u);
}

TEST(BuildDdgs, LoopsReuseTheirBranch) {
  const DdgSet ddgs = build_ddgs(testing::load_fixture("msd"));
  ASSERT_EQ(ddgs.segments.size(), 3u);
  EXPECT_EQ(ddgs.branches.size(), 1u);
  EXPECT_EQ(ddgs.segments[0].exit_branch, 0u);
  EXPECT_EQ(ddgs.segments[2].exit_branch, 0u);
  EXPECT_EQ(ddgs.segments[2].role, DdgRole::Interior);
}

TEST(BuildDdgs, RejectsUnconditionalCycles) {
  EXPECT_THROW(build_ddgs(parse("LABEL @a\nJUMP @a\n")), GraphError);
}

TEST(BuildDdg, DropsImpliedEdges) {
  const DdgSet ddgs = build_ddgs(parse("H 0\nX 0\nZ 0\n"));
  const Ddg ddg = build_ddg(ddgs.segments[0], ddgs.qubits);
  EXPECT_EQ(ddg.edges(), (Edges{{0, 1}, {1, 2}}));
  EXPECT_EQ(ddg.ancestors()[2], (std::vector<std::size_t>{0, 1}));
}

TEST(BuildDdg, IndependentInstructionsHaveNoEdges) {
  const DdgSet ddgs = build_ddgs(parse("DECLARE a INTEGER\nH 0\nH 1\nMOVE a 1\n"));
  const Ddg ddg = build_ddg(ddgs.segments[0], ddgs.qubits);
  EXPECT_EQ(ddg.edges(), (Edges{{0, 3}}));
}

// Emission renames branch targets to generated labels; compare the rest.
std::vector<Instruction> without_targets(std::vector<Instruction> body) {
  for (auto& inst : body) {
    if (inst.is<JumpWhen>()) inst.as<JumpWhen>().target.clear();
    if (inst.is<JumpUnless>()) inst.as<JumpUnless>().target.clear();
  }
  return body;
}

TEST(ToProgram, ReproducesSegments) {
  for (const char* name : testing::kFixtures) {
    const DdgSet ddgs = build_ddgs(testing::load_fixture(name));
    const DdgSet again = build_ddgs(to_program(ddgs));
    ASSERT_EQ(again.segments.size(), ddgs.segments.size()) << name;
    for (std::size_t i = 0; i < ddgs.segments.size(); ++i) {
      EXPECT_EQ(without_targets(again.segments[i].instructions),
                without_targets(ddgs.segments[i].instructions)) << name << " " << i;
      EXPECT_EQ(again.segments[i].role, ddgs.segments[i].role);
    }
  }
}

TEST(ToProgram, ReproducesRandomSegments) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DdgSet ddgs = build_ddgs(testing::random_program(seed));
    const DdgSet again = build_ddgs(to_program(ddgs));
    ASSERT_EQ(again.segments.size(), ddgs.segments.size()) << testing::random_program_text(seed);
    for (std::size_t i = 0; i < ddgs.segments.size(); ++i) {
      EXPECT_EQ(without_targets(again.segments[i].instructions),
                without_targets(ddgs.segments[i].instructions)) << "seed " << seed;
    }
  }
}

Ddg random_dag(std::mt19937_64& rng, std::size_t n, double density) {
  Ddg ddg;
  ddg.id = "random";
  ddg.nodes.assign(n, Instruction{Halt{}});
  ddg.preds.assign(n, {});
  ddg.succs.assign(n, {});
  std::bernoulli_distribution edge(density);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (edge(rng)) ddg.add_edge(i, j);
    }
  }
  return ddg;
}

TEST(Linearize, RespectsRandomDags) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    Ddg ddg = random_dag(rng, n, 0.15);
    ddg.pinned_terminator = trial % 2 == 0;
    const auto order = linearize(ddg);
    EXPECT_TRUE(respects(ddg, order));
    if (ddg.pinned_terminator) {
      EXPECT_EQ(order.back(), n - 1);
    }
  }
}

TEST(Linearize, BreaksTiesBySegmentOrder) {
  std::mt19937_64 rng(1);
  const Ddg ddg = random_dag(rng, 12, 0.0);
  std::vector<std::size_t> identity(12);
  for (std::size_t i = 0; i < 12; ++i) identity[i] = i;
  EXPECT_EQ(linearize(ddg), identity);
}

TEST(Respects, RejectsViolations) {
  std::mt19937_64 rng(3);
  Ddg ddg = random_dag(rng, 4, 0.0);
  ddg.add_edge(0, 3);
  EXPECT_TRUE(respects(ddg, {1, 0, 2, 3}));
  EXPECT_FALSE(respects(ddg, {3, 0, 1, 2}));
  EXPECT_FALSE(respects(ddg, {0, 1, 2}));
  EXPECT_FALSE(respects(ddg, {0, 0, 2, 3}));
  ddg.pinned_terminator = true;
  EXPECT_FALSE(respects(ddg, {0, 3, 1, 2}));
}

TEST(Cfg, SplitsDevicesIntoParallelBlocks) {
  const Program p = parse(testing::kCoherenceExample);
  const Cfg cfg = build_cfg(p);
  ASSERT_FALSE(cfg.blocks.empty());
  // DECLAREs and the first two gates form the first parallel pair.
  EXPECT_EQ(cfg.blocks[0].kind, BlockKind::ClassicalOnly);
  EXPECT_EQ(cfg.blocks[1].kind, BlockKind::QuantumOnly);
  EXPECT_EQ(cfg.blocks[0].parallel_partner, 1u);
  std::size_t hybrid = 0;
  for (const auto& b : cfg.blocks) hybrid += b.kind == BlockKind::HybridControl;
  EXPECT_EQ(hybrid, 3u);
  for (const auto& [from, to] : cfg.edges) {
    EXPECT_LT(from, cfg.blocks.size());
    EXPECT_LT(to, cfg.blocks.size());
  }
}

TEST(Cfg, JumpsAddEdgesToLabels) {
  const Program p = parse(testing::kBranchExample);
  const Cfg cfg = build_cfg(p);
  std::size_t label_block = cfg.blocks.size();
  std::size_t jump_block = cfg.blocks.size();
  for (const auto& b : cfg.blocks) {
    for (std::size_t pos : b.instructions) {
      if (p.instructions[pos].is<Label>()) label_block = b.id;
      if (p.instructions[pos].is<JumpWhen>()) jump_block = b.id;
    }
  }
  ASSERT_LT(label_block, cfg.blocks.size());
  ASSERT_LT(jump_block, cfg.blocks.size());
  EXPECT_NE(std::find(cfg.edges.begin(), cfg.edges.end(), std::pair{jump_block, label_block}),
            cfg.edges.end());
}

// Accepts the subset of the DOT language that the emitter uses: a digraph of
// node, edge and default-node statements with attribute lists.
class DotChecker {
 public:
  explicit DotChecker(const std::string& text) : text_(text) {}

  bool valid() {
    try {
      expect_word("digraph");
      id();
      expect("{");
      while (peek() != "}") statement();
      expect("}");
      skip_space();
      return pos_ == text_.size();
    } catch (const std::exception&) {
      return false;
    }
  }

 private:
  void statement() {
    const std::string first = id();
    if (peek() == "->") {
      expect("->");
      id();
    }
    if (peek() == "[") attributes();
    expect(";");
    (void)first;
  }
  void attributes() {
    expect("[");
    while (peek() != "]") {
      id();
      expect("=");
      id();
      if (peek() == ",") expect(",");
    }
    expect("]");
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  std::string peek() {
    skip_space();
    if (pos_ >= text_.size()) return "";
    if (text_.compare(pos_, 2, "->") == 0) return "->";
    return std::string(1, text_[pos_]);
  }
  void expect(const std::string& token) {
    if (peek() != token) throw std::runtime_error("expected " + token);
    pos_ += token.size();
  }
  void expect_word(const std::string& word) {
    if (id() != word) throw std::runtime_error("expected " + word);
  }
  std::string id() {
    skip_space();
    if (pos_ >= text_.size()) throw std::runtime_error("eof");
    const std::size_t begin = pos_;
    if (text_[pos_] == '"') {
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\') ++pos_;
        if (text_[pos_] == '\n') throw std::runtime_error("newline in string");
        ++pos_;
      }
      if (pos_ >= text_.size()) throw std::runtime_error("unterminated string");
      ++pos_;
      return text_.substr(begin, pos_ - begin);
    }
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ == begin) throw std::runtime_error("expected identifier");
    return text_.substr(begin, pos_ - begin);
  }

  std::string text_;
  std::size_t pos_ = 0;
};

TEST(Dot, CheckerRejectsBrokenInput) {
  EXPECT_TRUE(DotChecker("digraph g { a -> b; }").valid());
  EXPECT_FALSE(DotChecker("digraph g { a -> ; }").valid());
  EXPECT_FALSE(DotChecker("digraph g { a [label=\"x]; }").valid());
  EXPECT_FALSE(DotChecker("digraph g { a -> b; ").valid());
}

TEST(Dot, EmittedGraphsParse) {
  for (const char* name : testing::kFixtures) {
    const Program p = testing::load_fixture(name);
    EXPECT_TRUE(DotChecker(to_dot(build_cfg(p), p)).valid()) << name;
    const DdgSet ddgs = build_ddgs(p);
    for (const auto& s : ddgs.segments) {
      const std::string dot = to_dot(build_ddg(s, ddgs.qubits));
      EXPECT_TRUE(DotChecker(dot).valid()) << name << " " << s.id << "\n" << dot;
    }
  }
}

TEST(Dot, EdgesMatchTheGraph) {
  const DdgSet ddgs = build_ddgs(parse(testing::kBranchExample));
  const std::string dot = to_dot(build_ddg(ddgs.segments[0], ddgs.qubits));
  EXPECT_NE(dot.find("n0 -> n2;"), std::string::npos);
  EXPECT_NE(dot.find("n1 -> n2;"), std::string::npos);
  EXPECT_NE(dot.find("n2 -> n3;"), std::string::npos);
  EXPECT_EQ(dot.find("n0 -> n1;"), std::string::npos);
}

}  // namespace
}  // namespace quilopt
