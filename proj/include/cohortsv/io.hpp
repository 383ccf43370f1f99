// include/cohortsv/io.hpp

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

#ifndef COHORTSV_IO_HPP
#define COHORTSV_IO_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cohortsv/cohort.hpp"
#include "cohortsv/decider.hpp"
#include "cohortsv/eval.hpp"
#include "cohortsv/feature_matrix.hpp"
#include "cohortsv/gmm.hpp"
#include "cohortsv/score_features.hpp"
#include "cohortsv/trial.hpp"

// File formats. Layouts are documented in docs/formats.md.
namespace cohortsv::io {

namespace fs = std::filesystem;

inline constexpr int kFormatVersion = 1;

// Features: "CVF1", u32 frames, u32 dim, frames*dim f32, all little-endian.
void write_features_binary(std::ostream& out, const FeatureMatrix& m);
FeatureMatrix read_features_binary(std::istream& in, const std::string& source = "<stream>");
// Features as CSV, one frame per row, no header.
void write_features_csv(std::ostream& out, const FeatureMatrix& m);
FeatureMatrix read_features_csv(std::istream& in, const std::string& source = "<stream>");
/// Chooses the format from the extension: ".csv" is text, anything else CVF1.
void save_features(const fs::path& path, const FeatureMatrix& m);
FeatureMatrix load_features(const fs::path& path);

void save_gmm(const fs::path& path, const DiagGmm& gmm);
DiagGmm load_gmm(const fs::path& path);
void save_speaker(const fs::path& path, const SpeakerModel& model);
SpeakerModel load_speaker(const fs::path& path);
void save_cohort(const fs::path& path, const Cohort& cohort);
Cohort load_cohort(const fs::path& path);

void save_decider(const fs::path& path, const DecisionModel& model);
DecisionModel load_decider(const fs::path& path);

// Trial list: header "utterance_id,claimed_speaker,label".
void write_trials(std::ostream& out, const std::vector<TrialRecord>& trials);
std::vector<TrialRecord> read_trials(std::istream& in, const std::string& source = "<stream>");
void save_trials(const fs::path& path, const std::vector<TrialRecord>& trials);
std::vector<TrialRecord> load_trials(const fs::path& path);

struct ScoreRow {
  TrialRecord trial;
  ScoreVector scores;
};
// Score table: trial columns, s_claimed, s_ubm, s_cohort_0..s_cohort_{K-1}.
void write_scores(std::ostream& out, const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> read_scores(std::istream& in, const std::string& source = "<stream>");
void save_scores(const fs::path& path, const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> load_scores(const fs::path& path);

struct FeatureRow {
  TrialRecord trial;
  double s_claimed = 0.0;
  std::vector<double> values;
};
// Assembled features: trial columns, s_claimed, f0..f{d-1}.
void save_feature_rows(const fs::path& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> load_feature_rows(const fs::path& path);

void save_report(const fs::path& path, const EvalReport& report);
EvalReport load_report(const fs::path& path);

void save_det_csv(const fs::path& path, const std::vector<DetPoint>& points);
void save_histogram_csv(const fs::path& path, const std::vector<std::size_t>& genuine,
                        const std::vector<std::size_t>& imposter);
void save_cost_curve_csv(const fs::path& path,
                         const std::vector<std::pair<std::size_t, double>>& curve);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace cohortsv::io

#endif  // COHORTSV_IO_HPP
