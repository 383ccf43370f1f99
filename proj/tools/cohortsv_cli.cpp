// tools/cohortsv_cli.cpp

// Copyright 2026  The cohortsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: one subcommand per pipeline stage plus run-all.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cohortsv/io.hpp"
#include "cohortsv/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace cohortsv;

  CLI::App app{"Cohort-score speaker verification pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir, condition_name, decider_name;
  bool quiet = false;
  app.add_option("--config", config_path, "INI config file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed; reseeds every stage");
  app.add_option("--out", out_dir, "Output directory (overrides [output] dir)");
  app.add_option("--condition", condition_name, "Feature condition C1..C7");
  app.add_option("--decider", decider_name, "Decision model: svm or mlp");
  app.add_flag("--quiet", quiet, "Suppress stage progress");

  std::optional<std::size_t> k_override;
  auto* synth = app.add_subcommand("synth", "Generate the synthetic corpus");
  auto* train_ubm = app.add_subcommand("train-ubm", "EM-train the UBM");
  auto* adapt = app.add_subcommand("adapt", "MAP-adapt every enrolled speaker");
  auto* cluster = app.add_subcommand("cluster", "K-means the dev speaker models into a cohort");
  cluster->add_option("--k", k_override, "Cohort size (overrides [cohort] k)");
  auto* curve = app.add_subcommand("cost-curve", "Clustering cost J for k = 1..k_max");
  auto* score = app.add_subcommand("score", "Score every trial against claimed, UBM and cohort");
  auto* features = app.add_subcommand("features", "Assemble trial features for a condition");
  auto* train_decider = app.add_subcommand("train-decider", "Train the decision model on dev trials");
  auto* evaluate = app.add_subcommand("evaluate", "EER of the decider and the LLR baseline");
  auto* run_all_cmd = app.add_subcommand("run-all", "Every stage, all conditions, both deciders");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed) cfg.reseed(*seed);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (!condition_name.empty()) cfg.condition = parse_condition(condition_name);
    if (!decider_name.empty()) cfg.decider = parse_decider(decider_name);
    if (k_override) cfg.cohort.k = *k_override;
    cfg.verbose = !quiet;
    cfg.validate();

    const Workspace ws{cfg.out};
    if (*synth) {
      stage_synth(cfg, ws);
    } else if (*train_ubm) {
      stage_train_ubm(cfg, ws);
    } else if (*adapt) {
      stage_adapt(cfg, ws);
    } else if (*cluster) {
      std::cout << "J=" << io::format_double(stage_cluster(cfg, ws)) << '\n';
    } else if (*curve) {
      stage_cost_curve(cfg, ws);
    } else if (*score) {
      stage_score(cfg, ws);
    } else if (*features) {
      stage_features(cfg, ws, cfg.condition);
    } else if (*train_decider) {
      stage_train_decider(cfg, ws, cfg.condition, cfg.decider);
    } else if (*evaluate) {
      const auto [eer, base] = stage_evaluate(cfg, ws, cfg.condition, cfg.decider);
      std::cout << "condition,decider,eer,baseline_eer\n"
                << to_string(cfg.condition) << ',' << to_string(cfg.decider) << ','
                << io::format_double(eer) << ',' << io::format_double(base) << '\n';
    } else if (*run_all_cmd) {
      std::cout << "condition,decider,eer,baseline_eer\n";
      for (const auto& r : run_all(cfg, ws))
        std::cout << to_string(r.condition) << ',' << to_string(r.decider) << ','
                  << io::format_double(r.eer) << ',' << io::format_double(r.baseline_eer) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
