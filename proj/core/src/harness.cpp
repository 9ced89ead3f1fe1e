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

#include "quilopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace quilopt {

using nlohmann::json;

MetricTuple tuple_of(const MetricsReport& report) {
  return {report.total_wall_time, report.instr_count(), report.qin, report.qct};
}

double ExperimentSummary::frequency_percent(const MetricTuple& t) const {
  if (completed == 0) return 0.0;
  auto it = frequencies.find(t);
  return it == frequencies.end() ? 0.0 : 100.0 * static_cast<double>(it->second) / completed;
}

std::optional<MetricTuple> ExperimentSummary::modal() const {
  std::optional<MetricTuple> out;
  std::size_t count = 0;
  for (const auto& [t, n] : frequencies) {
    if (n > count) {
      out = t;
      count = n;
    }
  }
  return out;
}

std::vector<PassPair> draw_pairs(std::uint64_t seed, std::size_t run, std::size_t count) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
  std::mt19937_64 gen(seq);
  std::vector<PassPair> out;
  out.reserve(count);
  constexpr std::size_t n = std::size(kAllPassPairs);
  // 2^64 is a multiple of 4, so the modulus is unbiased.
  for (std::size_t i = 0; i < count; ++i) out.push_back(kAllPassPairs[gen() % n]);
  return out;
}

ExperimentSummary run_experiment(const Program& program, const ExperimentOptions& options) {
  ExperimentSummary summary;
  const DdgSet input = build_ddgs(program);
  summary.initial = report(input);

  for (std::size_t run = 0; run < options.runs; ++run) {
    RunRecord record;
    record.seed = options.seed;
    record.run = run;
    record.pairs = draw_pairs(options.seed, run, options.pairs_per_run);
    try {
      const DdgSet optimized = apply_passes(input, record.pairs);
      const Program out = to_program(optimized);
      record.metrics = report(optimized);
      if (run < options.verified_runs) {
        const Equivalence e = equivalent(program, out, options.tolerance, options.oracle);
        record.distance = e.distance;
        ++summary.verified;
        if (!e.equivalent) ++summary.inequivalent;
      }
    } catch (const std::exception& ex) {
      record.error = ex.what();
    }

    if (record.error) {
      ++summary.failed;
    } else {
      ++summary.completed;
      const MetricTuple t = tuple_of(record.metrics);
      ++summary.frequencies[t];
      if (!summary.best) {
        summary.best = t;
      } else {
        summary.best->wall = std::min(summary.best->wall, t.wall);
        summary.best->instr = std::min(summary.best->instr, t.instr);
        summary.best->qin = std::min(summary.best->qin, t.qin);
        summary.best->qct = std::min(summary.best->qct, t.qct);
      }
      if (!summary.best_run || t < tuple_of(*summary.best_run)) summary.best_run = record.metrics;
    }
    summary.records.push_back(std::move(record));
  }
  return summary;
}

std::vector<MetricDelta> compare(const MetricsReport& before, const MetricsReport& after) {
  auto delta = [](std::string name, double b, double a) {
    MetricDelta d{std::move(name), b, a, a - b, std::nullopt};
    if (b != 0.0) {
      d.percent = 100.0 * (a - b) / b;
    } else if (a == 0.0) {
      d.percent = 0.0;
    }
    return d;
  };
  return {
      delta("wall_time", static_cast<double>(before.total_wall_time),
            static_cast<double>(after.total_wall_time)),
      delta("instr_count", static_cast<double>(before.instr_count()),
            static_cast<double>(after.instr_count())),
      delta("qin", static_cast<double>(before.qin), static_cast<double>(after.qin)),
      delta("qct", static_cast<double>(before.qct), static_cast<double>(after.qct)),
  };
}

namespace {

json report_json(const MetricsReport& r) {
  json segments = json::array();
  for (const auto& s : r.per_ddg) {
    segments.push_back({{"id", s.id},
                        {"role", std::string(to_string(s.role))},
                        {"instr_count", s.instr_count},
                        {"wall_time", s.wall_time}});
  }
  return {{"per_ddg", segments},
          {"total_wall_time", r.total_wall_time},
          {"instr_count", r.instr_count()},
          {"qin", r.qin},
          {"qct", r.qct}};
}

json tuple_json(const MetricTuple& t) {
  return {{"wall_time", t.wall}, {"instr_count", t.instr}, {"qin", t.qin}, {"qct", t.qct}};
}

DdgRole role_from_string(const std::string& s) {
  if (s == "start") return DdgRole::Start;
  if (s == "interior") return DdgRole::Interior;
  if (s == "halt") return DdgRole::Halt;
  throw std::invalid_argument("unknown DDG role '" + s + "'");
}

MetricsReport report_from(const json& j) {
  MetricsReport r;
  for (const auto& s : j.at("per_ddg")) {
    r.per_ddg.push_back({s.at("id").get<std::string>(), role_from_string(s.at("role")),
                         s.at("instr_count").get<std::size_t>(), s.at("wall_time").get<TimeUnits>()});
  }
  r.total_wall_time = j.at("total_wall_time").get<TimeUnits>();
  r.qin = j.at("qin").get<std::size_t>();
  r.qct = j.at("qct").get<TimeUnits>();
  return r;
}

}  // namespace

std::string to_json(const MetricsReport& report, int indent) { return report_json(report).dump(indent); }

std::string to_json(const ExperimentSummary& summary, int indent) {
  json j;
  j["initial"] = report_json(summary.initial);
  j["runs"] = summary.records.size();
  j["completed"] = summary.completed;
  j["failed"] = summary.failed;
  j["verified"] = summary.verified;
  j["inequivalent"] = summary.inequivalent;
  j["best"] = summary.best ? tuple_json(*summary.best) : json(nullptr);
  j["best_run"] = summary.best_run ? report_json(*summary.best_run) : json(nullptr);
  json freq = json::array();
  std::vector<std::pair<MetricTuple, std::size_t>> rows(summary.frequencies.begin(),
                                                        summary.frequencies.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [t, n] : rows) {
    json row = tuple_json(t);
    row["count"] = n;
    row["percent"] = summary.frequency_percent(t);
    freq.push_back(std::move(row));
  }
  j["frequencies"] = std::move(freq);
  json errors = json::array();
  for (const auto& r : summary.records) {
    if (r.error) errors.push_back({{"run", r.run}, {"error", *r.error}});
  }
  j["errors"] = std::move(errors);
  return j.dump(indent);
}

std::string to_json(const std::vector<MetricDelta>& deltas, int indent) {
  json j;
  for (const auto& d : deltas) {
    j[d.metric] = {{"before", d.before},
                   {"after", d.after},
                   {"absolute", d.absolute},
                   {"percent", d.percent ? json(*d.percent) : json(nullptr)}};
  }
  return j.dump(indent);
}

MetricsReport metrics_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.contains("per_ddg")) return report_from(j);
    if (j.contains("best_run") && !j.at("best_run").is_null()) return report_from(j.at("best_run"));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed metrics JSON: ") + e.what());
  }
  throw std::invalid_argument("JSON holds neither a metrics report nor an experiment summary");
}

}  // namespace quilopt
