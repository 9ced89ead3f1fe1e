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

#ifndef QUILOPT_METRICS_HPP_
#define QUILOPT_METRICS_HPP_

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quilopt/graphs.hpp"
#include "quilopt/ir.hpp"

namespace quilopt {

// Unit-cost two-device model: every instruction takes one time unit on its
// device, labels take none, and there is no communication latency.
using TimeUnits = std::int64_t;

struct InstructionTiming {
  TimeUnits start = 0;
  TimeUnits end = 0;
};

// Two clocks advanced over a sequence. Classical work runs on the CPU clock and
// quantum work on the QPU clock; a hybrid instruction waits for both and moves
// them together.
struct Timeline {
  TimeUnits cpu_clock = 0;
  TimeUnits qpu_clock = 0;
  std::vector<InstructionTiming> timings;

  TimeUnits makespan() const { return std::max(cpu_clock, qpu_clock); }
};

Timeline simulate(std::span<const Instruction> sequence);

TimeUnits wall_time(std::span<const Instruction> sequence);

// Number of instructions issued between the first quantum instruction and the
// first hybrid instruction of the sequence (both inclusive of the quantum one).
// Zero when either is absent or the hybrid comes first.
std::size_t quantum_lead(std::span<const Instruction> sequence);

std::size_t qin(const DdgSet& ddgs);

struct QctBreakdown {
  TimeUnits quantum_before = 0;
  TimeUnits between = 0;
  TimeUnits quantum_after = 0;
  // Index of the halt segment chosen as the worst-case last segment, if any.
  std::optional<std::size_t> last_segment;

  TimeUnits total() const { return quantum_before + between + quantum_after; }
};

QctBreakdown qct_breakdown(const DdgSet& ddgs);
TimeUnits qct(const DdgSet& ddgs);

struct SegmentMetrics {
  std::string id;
  DdgRole role = DdgRole::Halt;
  std::size_t instr_count = 0;
  TimeUnits wall_time = 0;

  bool operator==(const SegmentMetrics&) const = default;
};

struct MetricsReport {
  std::vector<SegmentMetrics> per_ddg;
  TimeUnits total_wall_time = 0;
  std::size_t qin = 0;
  TimeUnits qct = 0;

  std::size_t instr_count() const;
  bool operator==(const MetricsReport&) const = default;
};

MetricsReport report(const DdgSet& ddgs);
MetricsReport report(const Program& program);

}  // namespace quilopt

#endif  // QUILOPT_METRICS_HPP_
