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

#include <algorithm>

#include "quilopt/metrics.hpp"
#include "support.hpp"

namespace quilopt {
namespace {

std::vector<Instruction> body(const std::string& text) {
  return build_ddgs(parse(text)).segments.at(0).instructions;
}

TEST(WallTime, DevicesRunInParallel) {
  EXPECT_EQ(wall_time(body("DECLARE a INTEGER\nH 0\nMOVE a 1\nX 0\n")), 2);
  EXPECT_EQ(wall_time(body("DECLARE m BIT\nH 0\nMEASURE 0 m\nH 0\n")), 3);
  EXPECT_EQ(wall_time({}), 0);
}

TEST(WallTime, HybridWaitsForBothDevices) {
  const auto seq = body("DECLARE a INTEGER\nDECLARE m BIT\nMOVE a 1\nADD a 1\nH 0\nMEASURE 0 m\n");
  const Timeline t = simulate(seq);
  ASSERT_EQ(t.timings.size(), seq.size());
  EXPECT_EQ(t.timings.back().start, 4);
  EXPECT_EQ(t.makespan(), 5);
  EXPECT_EQ(t.cpu_clock, t.qpu_clock);
}

TEST(Qct, SingleSegmentBreakdown) {
  const DdgSet ddgs = build_ddgs(parse(testing::kCoherenceExample));
  const QctBreakdown b = qct_breakdown(ddgs);
  EXPECT_EQ(b.quantum_before, 2);
  EXPECT_EQ(b.between, 6);
  EXPECT_EQ(b.quantum_after, 1);
  EXPECT_EQ(b.total(), 9);
  EXPECT_EQ(qct(ddgs), 9);
}

TEST(Qct, NoHybridMeansAllQuantum) {
  const DdgSet ddgs = build_ddgs(parse("DECLARE a BIT\nH 0\nX 1\nMOVE a 1\n"));
  EXPECT_EQ(qct(ddgs), 2);
}

TEST(Qct, MultiSegmentSumsLaterWallTimes) {
  // Start: H before the first hybrid, MEASURE and JUMP-WHEN span 2. The two
  // halts (Y Z MEASURE, Z MEASURE) add their walls 3 and 2 and nothing trails.
  const DdgSet ddgs = build_ddgs(parse(testing::kBranchExample));
  const QctBreakdown b = qct_breakdown(ddgs);
  EXPECT_EQ(b.quantum_before, 1);
  EXPECT_EQ(b.between, 2 + 3 + 2);
  EXPECT_EQ(b.quantum_after, 0);
  EXPECT_EQ(b.total(), 8);
}

TEST(Qct, WorstHaltTailIsAdded) {
  const DdgSet ddgs = build_ddgs(parse(
      "DECLARE m BIT\nMEASURE 0 m\nJUMP-WHEN @x m\nX 1\nX 1\nLABEL @x\nMEASURE 1 m\nX 0\n"));
  const QctBreakdown b = qct_breakdown(ddgs);
  // halt1 = X X MEASURE X, halt2 = MEASURE X; each trails by one gate.
  EXPECT_EQ(b.quantum_after, 1);
  ASSERT_TRUE(b.last_segment.has_value());
}

TEST(QuantumLead, CountsIssuedInstructionsBeforeTheFirstHybrid) {
  EXPECT_EQ(quantum_lead(body("DECLARE a INTEGER\nDECLARE b INTEGER\nDECLARE m BIT\n"
                              "H 0\nMOVE a 1\nMOVE b 2\nMEASURE 0 m\n")),
            3u);
  EXPECT_EQ(quantum_lead(body("DECLARE m BIT\nMEASURE 0 m\nH 0\n")), 0u);
  EXPECT_EQ(quantum_lead(body("H 0\nX 0\n")), 0u);
}

TEST(Qin, CountsQuantumAndHybrid) {
  const DdgSet ddgs = build_ddgs(parse(testing::kCoherenceExample));
  EXPECT_EQ(qin(ddgs), 9u);
  EXPECT_EQ(qin(build_ddgs(parse(testing::kBranchExample))), 3u + 3u + 2u);
}

TEST(Report, CoherenceExample) {
  const MetricsReport r = report(parse(testing::kCoherenceExample));
  ASSERT_EQ(r.per_ddg.size(), 1u);
  EXPECT_EQ(r.per_ddg[0].instr_count, 12u);
  EXPECT_EQ(r.total_wall_time, 9);
  EXPECT_EQ(r.instr_count(), 12u);
  EXPECT_EQ(r.qin, 9u);
  EXPECT_EQ(r.qct, 9);
}

struct InitialRow {
  const char* fixture;
  std::vector<std::size_t> instr;
  std::vector<TimeUnits> wall;
  std::size_t qin;
  TimeUnits qct;
};

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(Report, FixturesMatchReferenceMetrics) {
  const InitialRow rows[] = {
      {"teleportation", {8, 2, 2}, {6, 2, 1}, 9, 10},
      {"msd", {67, 63, 6}, {62, 62, 6}, 66, 130},
      {"rus", {12, 11, 10, 7}, {9, 10, 9, 6}, 34, 35},
      {"ipe", {55}, {45}, 25, 33},
  };
  for (const auto& row : rows) {
    const MetricsReport r = report(testing::load_fixture(row.fixture));
    std::vector<std::size_t> instr;
    std::vector<TimeUnits> wall;
    for (const auto& s : r.per_ddg) {
      instr.push_back(s.instr_count);
      wall.push_back(s.wall_time);
    }
    // Per-DDG values pair up; compare as multisets of (instr, wall).
    std::vector<std::pair<std::size_t, TimeUnits>> got;
    std::vector<std::pair<std::size_t, TimeUnits>> want;
    for (std::size_t i = 0; i < instr.size(); ++i) got.emplace_back(instr[i], wall[i]);
    for (std::size_t i = 0; i < row.instr.size(); ++i) want.emplace_back(row.instr[i], row.wall[i]);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want) << row.fixture;
    EXPECT_EQ(sorted(instr), sorted(row.instr)) << row.fixture;
    EXPECT_EQ(r.qin, row.qin) << row.fixture;
    EXPECT_EQ(r.qct, row.qct) << row.fixture;
  }
}

}  // namespace
}  // namespace quilopt
