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

#ifndef QUILOPT_TESTS_SUPPORT_HPP_
#define QUILOPT_TESTS_SUPPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include "quilopt/graphs.hpp"
#include "quilopt/ir.hpp"

namespace quilopt::testing {

std::string fixture_path(std::string_view name);
std::string read_file(const std::string& path);
Program load_fixture(std::string_view name);

inline constexpr const char* kFixtures[] = {"teleportation", "msd", "rus", "ipe"};

// Twelve instructions, two measurements and a parameterized rotation between
// them, with one quantum gate after the last measurement.
inline constexpr const char* kCoherenceExample =
    "DECLARE r REAL\n"
    "DECLARE m BIT\n"
    "H 0\n"
    "Y 0\n"
    "MEASURE 0 m\n"
    "H 0\n"
    "Z 0\n"
    "MOVE r 2\n"
    "RZ(r) 0\n"
    "H 0\n"
    "MEASURE 0 m\n"
    "Z 0\n";

// A conditional jump whose target is also reached by falling through.
inline constexpr const char* kBranchExample =
    "DECLARE m BIT\n"
    "H 0\n"
    "MEASURE 0 m\n"
    "JUMP-WHEN @label m\n"
    "Y 0\n"
    "LABEL @label\n"
    "Z 0\n"
    "MEASURE 0 m\n";

// With `a` read out: ADD a 10 is overwritten unread and b is never read.
inline constexpr const char* kDeadStoreExample =
    "DECLARE a INTEGER\n"
    "DECLARE b INTEGER\n"
    "MOVE a 3\n"
    "ADD a 10\n"
    "MOVE b 7\n"
    "MOVE a 10\n";

// A measurement result fed back into a rotation angle.
inline constexpr const char* kFeedbackExample =
    "DECLARE m INTEGER[1]\n"
    "H 0\n"
    "MEASURE 0 m\n"
    "RZ(m) 0\n";

struct RandomProgramOptions {
  unsigned max_qubits = 6;
  unsigned max_instructions = 40;
  unsigned max_conditional_jumps = 2;
};

// Quil text for a small well-formed program: three DECLAREs (ro BIT[3],
// n INTEGER[2], r REAL[2]) followed by gates, classical arithmetic, measurements,
// resets and forward conditional jumps. Divisions only use nonzero literals.
std::string random_program_text(std::uint64_t seed, const RandomProgramOptions& options = {});
Program random_program(std::uint64_t seed, const RandomProgramOptions& options = {});

// Positions of instructions that are the last writer of a readout cell in a
// halt segment. Those writes reach the end of the program.
std::set<std::size_t> final_readout_writers(const Segment& segment, const DdgSet& ddgs);

}  // namespace quilopt::testing

#endif  // QUILOPT_TESTS_SUPPORT_HPP_
