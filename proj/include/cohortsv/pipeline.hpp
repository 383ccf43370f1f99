// include/cohortsv/pipeline.hpp

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

#ifndef COHORTSV_PIPELINE_HPP
#define COHORTSV_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cohortsv/cohort.hpp"
#include "cohortsv/decider.hpp"
#include "cohortsv/eval.hpp"
#include "cohortsv/gmm.hpp"
#include "cohortsv/score_features.hpp"
#include "cohortsv/synth.hpp"

namespace cohortsv {

namespace fs = std::filesystem;

enum class DeciderKind { kSvm, kMlp };
DeciderKind parse_decider(const std::string& name);
std::string to_string(DeciderKind kind);

/// Every stage's hyperparameters. Loaded from an INI file; see
/// configs/default.ini for the documented defaults.
struct ExperimentConfig {
  SynthConfig corpus;
  EmOptions ubm{32, 20, 1, 1e-6, 1e-4};
  double relevance = 16.0;
  KmeansOptions cohort{10, 50, 10, 2};
  std::size_t cost_curve_k_max = 20;
  double dev_fraction = 0.5;
  Condition condition = Condition::C3;
  DeciderKind decider = DeciderKind::kMlp;
  std::size_t imposters_per_utterance = 2;
  SvmOptions svm{1e-2, 200, 3, 1e-9};
  MlpOptions mlp{500, 0.01, 32, 4, 0.0};
  fs::path out = "run";
  /// Stage progress on std::clog.
  bool verbose = true;

  /// Throws InvalidInput describing the first bad field.
  void validate() const;
  /// Reseeds every stage from one master seed (corpus = seed, ubm = seed + 1, ...).
  void reseed(std::uint64_t seed);
};

ExperimentConfig load_config(const fs::path& path);
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
/// INI text reproducing `config`.
std::string dump_config(const ExperimentConfig& config);

/// Output layout under one directory.
struct Workspace {
  fs::path root;

  fs::path corpus() const { return root / "corpus"; }
  fs::path ubm_train() const { return corpus() / "ubm_train.cvf"; }
  fs::path enroll(const std::string& spk) const { return corpus() / "enroll" / (spk + ".cvf"); }
  fs::path test(const std::string& utt) const { return corpus() / "test" / (utt + ".cvf"); }
  fs::path speakers() const { return corpus() / "speakers.csv"; }
  fs::path utterances() const { return corpus() / "utterances.csv"; }
  fs::path trials() const { return corpus() / "trials.csv"; }

  fs::path models() const { return root / "models"; }
  fs::path ubm() const { return models() / "ubm.json"; }
  fs::path speaker_model(const std::string& spk) const {
    return models() / "speakers" / (spk + ".json");
  }
  fs::path cohort() const { return models() / "cohort.json"; }
  fs::path decider(DeciderKind kind, Condition c) const {
    return models() / ("decider_" + to_string(kind) + "_" + to_string(c) + ".json");
  }

  fs::path cluster_assignment() const { return root / "cluster_assignment.csv"; }
  fs::path cost_curve() const { return root / "cost_curve.csv"; }
  fs::path scores(const std::string& part) const { return root / ("scores_" + part + ".csv"); }
  fs::path features(const std::string& part, Condition c) const {
    return root / "features" / (part + "_" + to_string(c) + ".csv");
  }
  fs::path reports() const { return root / "reports"; }
  fs::path summary() const { return root / "summary.csv"; }
  fs::path manifest() const { return root / "manifest.sha256"; }
};

struct SpeakerEntry {
  std::string id;
  std::string partition;  // "dev" or "eval"
};

/// Stage entry points. Each reads its declared inputs under `ws` and writes
/// its outputs there; missing inputs raise std::runtime_error naming the path.
void stage_synth(const ExperimentConfig& cfg, const Workspace& ws);
void stage_train_ubm(const ExperimentConfig& cfg, const Workspace& ws);
void stage_adapt(const ExperimentConfig& cfg, const Workspace& ws);
/// Returns the clustering cost J of the saved cohort.
double stage_cluster(const ExperimentConfig& cfg, const Workspace& ws);
void stage_cost_curve(const ExperimentConfig& cfg, const Workspace& ws);
void stage_score(const ExperimentConfig& cfg, const Workspace& ws);
void stage_features(const ExperimentConfig& cfg, const Workspace& ws, Condition condition);
void stage_train_decider(const ExperimentConfig& cfg, const Workspace& ws, Condition condition,
                         DeciderKind kind);
/// Evaluates one decider on eval trials and the LLR baseline; returns
/// {decider EER, baseline EER}. Also writes rank histograms and r-diff rows.
std::pair<double, double> stage_evaluate(const ExperimentConfig& cfg, const Workspace& ws,
                                         Condition condition, DeciderKind kind);

struct SummaryRow {
  Condition condition;
  DeciderKind decider;
  double eer;
  double baseline_eer;
};

/// Every stage, every condition with both deciders, then summary.csv and a
/// SHA-256 manifest of all outputs.
std::vector<SummaryRow> run_all(const ExperimentConfig& cfg, const Workspace& ws);

std::vector<SpeakerEntry> load_speakers(const fs::path& path);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

}  // namespace cohortsv

#endif  // COHORTSV_PIPELINE_HPP
