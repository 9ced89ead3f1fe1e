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

#ifndef QUILOPT_HARNESS_HPP_
#define QUILOPT_HARNESS_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quilopt/ir.hpp"
#include "quilopt/metrics.hpp"
#include "quilopt/oracle.hpp"
#include "quilopt/transforms.hpp"

namespace quilopt {

// (total wall time, instruction count, QIN, QCT) of one program.
struct MetricTuple {
  TimeUnits wall = 0;
  std::size_t instr = 0;
  std::size_t qin = 0;
  TimeUnits qct = 0;

  auto operator<=>(const MetricTuple&) const = default;
};

MetricTuple tuple_of(const MetricsReport& report);

struct RunRecord {
  std::uint64_t seed = 0;
  std::size_t run = 0;
  std::vector<PassPair> pairs;
  MetricsReport metrics;
  // Total variation distance to the input, for oracle-verified runs.
  std::optional<double> distance;
  // Set when a transform failed validation; the run is then not aggregated.
  std::optional<std::string> error;
};

struct ExperimentOptions {
  std::size_t runs = 500;
  std::size_t pairs_per_run = 25;
  std::uint64_t seed = 0;
  // The first `verified_runs` runs are compared with the input by the oracle.
  std::size_t verified_runs = 10;
  double tolerance = 1e-9;
  OracleOptions oracle;
};

struct ExperimentSummary {
  MetricsReport initial;
  std::vector<RunRecord> records;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t verified = 0;
  std::size_t inequivalent = 0;

  // Minimum of each metric over all completed runs, taken independently.
  std::optional<MetricTuple> best;
  // The completed run with the smallest tuple (wall time first).
  std::optional<MetricsReport> best_run;

  std::map<MetricTuple, std::size_t> frequencies;

  double frequency_percent(const MetricTuple& t) const;
  // Most frequent tuple; ties go to the smallest tuple.
  std::optional<MetricTuple> modal() const;
};

// Pairs for one run, drawn uniformly with replacement from a generator seeded
// by (seed, run).
std::vector<PassPair> draw_pairs(std::uint64_t seed, std::size_t run, std::size_t count);

ExperimentSummary run_experiment(const Program& program, const ExperimentOptions& options = {});

struct MetricDelta {
  std::string metric;
  double before = 0;
  double after = 0;
  double absolute = 0;
  // Relative change in percent; nullopt when `before` is zero and they differ.
  std::optional<double> percent;
};

std::vector<MetricDelta> compare(const MetricsReport& before, const MetricsReport& after);

// JSON with keys in sorted order.
std::string to_json(const MetricsReport& report, int indent = 2);
std::string to_json(const ExperimentSummary& summary, int indent = 2);
std::string to_json(const std::vector<MetricDelta>& deltas, int indent = 2);
// Accepts the output of to_json(MetricsReport) or an experiment summary, whose
// best run is used. Throws std::invalid_argument on other input.
MetricsReport metrics_from_json(const std::string& text);

}  // namespace quilopt

#endif  // QUILOPT_HARNESS_HPP_
