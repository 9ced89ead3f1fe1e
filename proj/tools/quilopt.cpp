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

// Command-line driver for the quilopt library.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quilopt/analyses.hpp"
#include "quilopt/graphs.hpp"
#include "quilopt/harness.hpp"
#include "quilopt/ir.hpp"
#include "quilopt/metrics.hpp"
#include "quilopt/oracle.hpp"
#include "quilopt/transforms.hpp"

namespace fs = std::filesystem;
using namespace quilopt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load(const std::string& path, const std::string& readout = {}) {
  Program p = parse(slurp(path));
  if (!readout.empty()) {
    p.readout.clear();
    std::stringstream ss(readout);
    for (std::string name; std::getline(ss, name, ',');) {
      if (!name.empty()) p.readout.insert(name);
    }
    validate(p);
  }
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void print_summary(const ExperimentSummary& s) {
  const MetricTuple initial = tuple_of(s.initial);
  std::cout << "initial: wall " << initial.wall << ", instr " << initial.instr << ", qin "
            << initial.qin << ", qct " << initial.qct << "\n";
  std::cout << "runs: " << s.completed << " completed, " << s.failed << " failed, "
            << s.verified << " oracle-verified (" << s.inequivalent << " mismatched)\n";
  if (s.best) {
    std::cout << "best: wall " << s.best->wall << ", instr " << s.best->instr << ", qin "
              << s.best->qin << ", qct " << s.best->qct << "\n";
  }
  std::cout << "  wall  instr  qin  qct  frequency\n";
  std::vector<std::pair<MetricTuple, std::size_t>> rows(s.frequencies.begin(), s.frequencies.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [t, n] : rows) {
    std::cout << std::setw(6) << t.wall << std::setw(7) << t.instr << std::setw(5) << t.qin
              << std::setw(5) << t.qct << std::setw(10) << std::fixed << std::setprecision(1)
              << s.frequency_percent(t) << "%\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimizer and metrics for hybrid quantum-classical Quil programs"};
  app.require_subcommand(1);

  std::string file;
  std::string readout;

  auto* metrics_cmd = app.add_subcommand("metrics", "Print wall time, instruction count, QIN and QCT");
  metrics_cmd->add_option("file", file, "Quil program")->required()->check(CLI::ExistingFile);

  std::string passes;
  std::string out_path;
  bool dump = false;
  auto* optimize_cmd = app.add_subcommand("optimize", "Apply pass pairs and print the result");
  optimize_cmd->add_option("file", file, "Quil program")->required()->check(CLI::ExistingFile);
  optimize_cmd->add_option("--passes", passes,
                           "Comma-separated: const-prop-fold, liveness-dce, hybrid-deps-reorder, "
                           "hybrid-deps-latest-quantum")
      ->required();
  optimize_cmd->add_option("--readout", readout, "Comma-separated readout regions");
  optimize_cmd->add_option("-o,--output", out_path, "Write the program here instead of stdout");
  optimize_cmd->add_flag("--dump-facts", dump, "Print analysis facts of the input as JSON to stderr");

  ExperimentOptions exp;
  std::string json_path;
  auto* experiment_cmd = app.add_subcommand("experiment", "Random phase-ordering experiment");
  experiment_cmd->add_option("file", file, "Quil program")->required()->check(CLI::ExistingFile);
  experiment_cmd->add_option("--runs", exp.runs, "Number of runs")->capture_default_str();
  experiment_cmd->add_option("--pairs", exp.pairs_per_run, "Pass pairs per run")->capture_default_str();
  experiment_cmd->add_option("--seed", exp.seed, "Generator seed")->capture_default_str();
  experiment_cmd->add_option("--verify", exp.verified_runs, "Runs checked by the oracle")
      ->capture_default_str();
  experiment_cmd->add_option("--readout", readout, "Comma-separated readout regions");
  experiment_cmd->add_option("--json", json_path, "Write the summary as JSON");

  bool cfg = false;
  bool ddg = false;
  std::string dot_dir = ".";
  auto* graph_cmd = app.add_subcommand("graph", "Write the CFG or the DDGs as DOT files");
  graph_cmd->add_option("file", file, "Quil program")->required()->check(CLI::ExistingFile);
  auto* cfg_flag = graph_cmd->add_flag("--cfg", cfg, "Control-flow graph");
  auto* ddg_flag = graph_cmd->add_flag("--ddg", ddg, "One DDG per segment");
  cfg_flag->excludes(ddg_flag);
  graph_cmd->add_option("--dot", dot_dir, "Output directory")->capture_default_str();

  OracleOptions oracle_options;
  auto* oracle_cmd = app.add_subcommand("oracle", "Print the exact readout distribution as JSON");
  oracle_cmd->add_option("file", file, "Quil program")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--max-steps", oracle_options.max_steps, "Step limit per branch")
      ->capture_default_str();
  oracle_cmd->add_option("--prune", oracle_options.prune_epsilon, "Drop branches below this probability")
      ->capture_default_str();
  oracle_cmd->add_option("--readout", readout, "Comma-separated readout regions");

  std::string before_path;
  std::string after_path;
  auto* compare_cmd = app.add_subcommand("compare", "Metric deltas between two JSON reports");
  compare_cmd->add_option("before", before_path, "Metrics or experiment JSON")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("after", after_path, "Metrics or experiment JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (metrics_cmd->parsed()) {
      std::cout << to_json(report(load(file))) << "\n";
    } else if (optimize_cmd->parsed()) {
      const Program program = load(file, readout);
      const auto pass_list = parse_pass_list(passes);
      const DdgSet input = build_ddgs(program);
      if (dump) std::cerr << dump_facts(input) << "\n";
      std::vector<SegmentChange> log;
      const DdgSet optimized = apply_passes(input, pass_list, &log);
      for (const auto& c : log) {
        std::cerr << to_string(c.pass) << " " << c.segment << ":" << c.change.position << " "
                  << c.change.description << "\n";
      }
      std::cerr << to_json(compare(report(input), report(optimized))) << "\n";
      const std::string text = emit(to_program(optimized));
      if (out_path.empty()) {
        std::cout << text;
      } else {
        write_file(out_path, text);
      }
    } else if (experiment_cmd->parsed()) {
      const ExperimentSummary s = run_experiment(load(file, readout), exp);
      print_summary(s);
      if (!json_path.empty()) write_file(json_path, to_json(s) + "\n");
      if (s.failed > 0 || s.inequivalent > 0) return 2;
    } else if (graph_cmd->parsed()) {
      if (!cfg && !ddg) throw std::runtime_error("graph needs --cfg or --ddg");
      const Program program = load(file);
      fs::create_directories(dot_dir);
      const std::string stem = fs::path(file).stem().string();
      if (cfg) {
        const fs::path path = fs::path(dot_dir) / (stem + "-cfg.dot");
        write_file(path, to_dot(build_cfg(program), program));
        std::cout << path.string() << "\n";
      } else {
        const DdgSet ddgs = build_ddgs(program);
        for (const auto& segment : ddgs.segments) {
          const fs::path path = fs::path(dot_dir) / (stem + "-" + segment.id + ".dot");
          write_file(path, to_dot(build_ddg(segment, ddgs.qubits)));
          std::cout << path.string() << "\n";
        }
      }
    } else if (oracle_cmd->parsed()) {
      std::cout << to_json(interpret(load(file, readout), oracle_options)) << "\n";
    } else if (compare_cmd->parsed()) {
      const MetricsReport before = metrics_from_json(slurp(before_path));
      const MetricsReport after = metrics_from_json(slurp(after_path));
      std::cout << to_json(compare(before, after)) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "quilopt: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
