// include/cohortsv/score_features.hpp

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

#ifndef COHORTSV_SCORE_FEATURES_HPP
#define COHORTSV_SCORE_FEATURES_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cohortsv/cohort.hpp"
#include "cohortsv/gmm.hpp"
#include "cohortsv/trial.hpp"

namespace cohortsv {

/// Frame-averaged log-likelihoods of one trial's test utterance.
struct ScoreVector {
  double s_claimed = 0.0;
  double s_ubm = 0.0;
  std::vector<double> s_cohort;  // cohort centroid order

  double llr() const { return s_claimed - s_ubm; }
};

ScoreVector score_vector(const FeatureMatrix& utterance, const SpeakerModel& claimed,
                         const DiagGmm& ubm, const Cohort& cohort);

/// z-normalized claimed score against this trial's cohort scores
/// (population standard deviation, floored at kNormSigmaFloor).
double feat_norm(const ScoreVector& sv);
inline constexpr double kNormSigmaFloor = 1e-6;

/// 1-based rank of s_claimed among {s_claimed} and the cohort scores, highest
/// first. Cohort scores equal to s_claimed rank below it.
std::size_t feat_rank_position(const ScoreVector& sv);

/// Ascending-sorted s_cohort[k] - s_claimed.
std::vector<double> feat_rank_diff(const ScoreVector& sv);

/// Feature subsets: the raw LLR always, plus norm / r-pos / r-diff.
enum class Condition { C1 = 1, C2, C3, C4, C5, C6, C7 };

inline constexpr Condition kAllConditions[] = {Condition::C1, Condition::C2, Condition::C3,
                                               Condition::C4, Condition::C5, Condition::C6,
                                               Condition::C7};

/// Parses "C1".."C7"; throws InvalidInput otherwise.
Condition parse_condition(std::string_view label);
std::string to_string(Condition c);

struct ConditionParts {
  bool norm = false;
  bool rank_position = false;
  bool rank_diff = false;
};
ConditionParts parts_of(Condition c);

/// 1 + norm + r-pos + K * r-diff.
std::size_t assembled_dim(Condition c, std::size_t cohort_size);

struct AssembledFeature {
  Condition condition = Condition::C1;
  std::vector<double> values;
};

/// [llr, norm?, r-pos?, r-diff...?] in that order.
AssembledFeature assemble(const ScoreVector& sv, Condition condition);

struct FeatureTrial {
  TrialRecord trial;
  AssembledFeature feature;
  double s_claimed = 0.0;
};

/// Keeps every genuine trial and, per test utterance, the two imposter trials
/// with the highest s_claimed (all of them when there are fewer). Input order
/// is preserved.
std::vector<FeatureTrial> imbalance_filter(const std::vector<FeatureTrial>& trials,
                                           std::size_t imposters_per_utterance = 2);

}  // namespace cohortsv

#endif  // COHORTSV_SCORE_FEATURES_HPP
