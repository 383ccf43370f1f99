// src/score_features.cpp

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

#include "cohortsv/score_features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cohortsv/error.hpp"

namespace cohortsv {

ScoreVector score_vector(const FeatureMatrix& utterance, const SpeakerModel& claimed,
                         const DiagGmm& ubm, const Cohort& cohort) {
  ScoreVector sv;
  sv.s_claimed = avg_loglik(claimed.gmm, utterance);
  sv.s_ubm = avg_loglik(ubm, utterance);
  sv.s_cohort.reserve(cohort.size());
  for (const auto& c : cohort.centroids) sv.s_cohort.push_back(avg_loglik(c, utterance));
  return sv;
}

double feat_norm(const ScoreVector& sv) {
  const std::size_t k = sv.s_cohort.size();
  if (k < 2) throw InvalidInput("feat_norm: needs at least 2 cohort scores, got " + std::to_string(k));
  double mean = 0.0;
  for (double s : sv.s_cohort) mean += s;
  mean /= static_cast<double>(k);
  double var = 0.0;
  for (double s : sv.s_cohort) var += (s - mean) * (s - mean);
  const double sigma = std::max(std::sqrt(var / static_cast<double>(k)), kNormSigmaFloor);
  return (sv.s_claimed - mean) / sigma;
}

std::size_t feat_rank_position(const ScoreVector& sv) {
  return 1 + static_cast<std::size_t>(std::count_if(
                 sv.s_cohort.begin(), sv.s_cohort.end(),
                 [&](double s) { return s > sv.s_claimed; }));
}

std::vector<double> feat_rank_diff(const ScoreVector& sv) {
  std::vector<double> d;
  d.reserve(sv.s_cohort.size());
  for (double s : sv.s_cohort) d.push_back(s - sv.s_claimed);
  std::sort(d.begin(), d.end());
  return d;
}

Condition parse_condition(std::string_view label) {
  if (label.size() == 2 && (label[0] == 'C' || label[0] == 'c') && label[1] >= '1' &&
      label[1] <= '7')
    return static_cast<Condition>(label[1] - '0');
  throw InvalidInput("unknown condition '" + std::string(label) + "' (expected C1..C7)");
}

std::string to_string(Condition c) { return "C" + std::to_string(static_cast<int>(c)); }

ConditionParts parts_of(Condition c) {
  switch (c) {
    case Condition::C1: return {true, false, false};
    case Condition::C2: return {false, true, false};
    case Condition::C3: return {false, false, true};
    case Condition::C4: return {true, true, false};
    case Condition::C5: return {true, false, true};
    case Condition::C6: return {false, true, true};
    case Condition::C7: return {true, true, true};
  }
  throw InvalidInput("unknown condition value " + std::to_string(static_cast<int>(c)));
}

std::size_t assembled_dim(Condition c, std::size_t cohort_size) {
  const ConditionParts p = parts_of(c);
  return 1 + (p.norm ? 1 : 0) + (p.rank_position ? 1 : 0) + (p.rank_diff ? cohort_size : 0);
}

AssembledFeature assemble(const ScoreVector& sv, Condition condition) {
  const ConditionParts p = parts_of(condition);
  AssembledFeature f;
  f.condition = condition;
  f.values.reserve(assembled_dim(condition, sv.s_cohort.size()));
  f.values.push_back(sv.llr());
  if (p.norm) f.values.push_back(feat_norm(sv));
  if (p.rank_position) f.values.push_back(static_cast<double>(feat_rank_position(sv)));
  if (p.rank_diff) {
    const auto d = feat_rank_diff(sv);
    f.values.insert(f.values.end(), d.begin(), d.end());
  }
  return f;
}

std::vector<FeatureTrial> imbalance_filter(const std::vector<FeatureTrial>& trials,
                                           std::size_t imposters_per_utterance) {
  std::map<std::string, std::vector<std::size_t>> imposters;
  for (std::size_t i = 0; i < trials.size(); ++i)
    if (trials[i].trial.label == TrialLabel::kImposter)
      imposters[trials[i].trial.utterance_id].push_back(i);

  std::vector<bool> keep(trials.size(), true);
  for (auto& [utt, idx] : imposters) {
    if (idx.size() <= imposters_per_utterance) continue;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return trials[a].s_claimed > trials[b].s_claimed;
    });
    for (std::size_t j = imposters_per_utterance; j < idx.size(); ++j) keep[idx[j]] = false;
  }
  std::vector<FeatureTrial> out;
  for (std::size_t i = 0; i < trials.size(); ++i)
    if (keep[i]) out.push_back(trials[i]);
  return out;
}

}  // namespace cohortsv
