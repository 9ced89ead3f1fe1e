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

#include "quilopt/metrics.hpp"

#include <algorithm>

namespace quilopt {

namespace {

using Sequence = std::span<const Instruction>;

std::optional<std::size_t> first_hybrid(Sequence seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (classify(seq[i]) == DeviceClass::Hybrid && !seq[i].is<Label>()) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> last_hybrid(Sequence seq) {
  for (std::size_t i = seq.size(); i-- > 0;) {
    if (classify(seq[i]) == DeviceClass::Hybrid && !seq[i].is<Label>()) return i;
  }
  return std::nullopt;
}

TimeUnits count_quantum(Sequence seq) {
  return std::count_if(seq.begin(), seq.end(), [](const Instruction& inst) {
    return classify(inst) == DeviceClass::Quantum;
  });
}

// Wall time of seq[from..to], both inclusive, on fresh clocks.
TimeUnits span_wall(Sequence seq, std::size_t from, std::size_t to) {
  return wall_time(seq.subspan(from, to - from + 1));
}

}  // namespace

Timeline simulate(Sequence sequence) {
  Timeline t;
  t.timings.reserve(sequence.size());
  for (const auto& inst : sequence) {
    InstructionTiming timing;
    if (inst.is<Label>()) {
      timing.start = timing.end = t.makespan();
    } else {
      switch (classify(inst)) {
        case DeviceClass::Classical:
          timing = {t.cpu_clock, t.cpu_clock + 1};
          t.cpu_clock = timing.end;
          break;
        case DeviceClass::Quantum:
          timing = {t.qpu_clock, t.qpu_clock + 1};
          t.qpu_clock = timing.end;
          break;
        case DeviceClass::Hybrid:
          timing.start = t.makespan();
          timing.end = timing.start + 1;
          t.cpu_clock = t.qpu_clock = timing.end;
          break;
      }
    }
    t.timings.push_back(timing);
  }
  return t;
}

TimeUnits wall_time(Sequence sequence) { return simulate(sequence).makespan(); }

std::size_t quantum_lead(Sequence sequence) {
  std::optional<std::size_t> first_quantum;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (classify(sequence[i]) == DeviceClass::Quantum) {
      first_quantum = i;
      break;
    }
  }
  const auto hybrid = first_hybrid(sequence);
  if (!first_quantum || !hybrid || *hybrid < *first_quantum) return 0;
  return *hybrid - *first_quantum;
}

std::size_t qin(const DdgSet& ddgs) {
  std::size_t n = 0;
  for (const auto& segment : ddgs.segments) {
    for (const auto& inst : segment.instructions) {
      if (classify(inst) != DeviceClass::Classical && !inst.is<Label>()) ++n;
    }
  }
  return n;
}

QctBreakdown qct_breakdown(const DdgSet& ddgs) {
  QctBreakdown out;
  if (ddgs.segments.empty()) return out;
  const Sequence start = ddgs.start().instructions;
  const auto first = first_hybrid(start);

  if (!ddgs.start().exit_branch) {
    // The whole program is one segment.
    if (!first) {
      out.quantum_before = count_quantum(start);
      return out;
    }
    const auto last = *last_hybrid(start);
    out.quantum_before = count_quantum(start.subspan(0, *first));
    out.between = span_wall(start, *first, last);
    out.quantum_after = count_quantum(start.subspan(last + 1));
    out.last_segment = 0;
    return out;
  }

  // A start segment with an exit branch always ends in a hybrid jump.
  out.quantum_before = count_quantum(start.subspan(0, *first));
  const TimeUnits start_span = span_wall(start, *first, start.size() - 1);
  TimeUnits all_other_walls = 0;
  for (std::size_t i = 1; i < ddgs.segments.size(); ++i) {
    all_other_walls += wall_time(ddgs.segments[i].instructions);
  }

  // Every DDG after the start is counted with its full wall time; the worst-case
  // halt DDG then adds the quantum work that trails its last hybrid instruction.
  out.between = start_span + all_other_walls;
  for (std::size_t h : ddgs.halts()) {
    const Sequence seq = ddgs.segments[h].instructions;
    const auto last = last_hybrid(seq);
    const TimeUnits after = last ? count_quantum(seq.subspan(*last + 1)) : count_quantum(seq);
    if (!out.last_segment || after > out.quantum_after) {
      out.quantum_after = after;
      out.last_segment = h;
    }
  }
  return out;
}

TimeUnits qct(const DdgSet& ddgs) { return qct_breakdown(ddgs).total(); }

std::size_t MetricsReport::instr_count() const {
  std::size_t n = 0;
  for (const auto& s : per_ddg) n += s.instr_count;
  return n;
}

MetricsReport report(const DdgSet& ddgs) {
  MetricsReport r;
  for (const auto& segment : ddgs.segments) {
    // Segments already hold their schedule; linearize() on a freshly built DDG
    // would return the same order.
    SegmentMetrics m{segment.id, segment.role, segment.instructions.size(),
                     wall_time(segment.instructions)};
    r.total_wall_time += m.wall_time;
    r.per_ddg.push_back(std::move(m));
  }
  r.qin = qin(ddgs);
  r.qct = qct(ddgs);
  return r;
}

MetricsReport report(const Program& program) { return report(build_ddgs(program)); }

}  // namespace quilopt
