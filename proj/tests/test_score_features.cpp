// tests/test_score_features.cpp

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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cohortsv/error.hpp"
#include "cohortsv/score_features.hpp"
#include "test_util.hpp"

using namespace cohortsv;

namespace {

ScoreVector sv_of(double claimed, std::vector<double> cohort, double ubm = 0.0) {
  return ScoreVector{claimed, ubm, std::move(cohort)};
}

ScoreVector random_sv(std::mt19937_64& rng, std::size_t k) {
  std::normal_distribution<double> n(0.0, 2.0);
  ScoreVector sv{n(rng), n(rng), {}};
  for (std::size_t i = 0; i < k; ++i) sv.s_cohort.push_back(n(rng));
  return sv;
}

FeatureTrial ft(const std::string& utt, TrialLabel label, double s) {
  return FeatureTrial{{utt, "spk", label}, {Condition::C1, {s}}, s};
}

}  // namespace

TEST_CASE("score_vector shape and consistency") {
  const DiagGmm ubm = testing::random_gmm(3, 2, 1);
  Cohort cohort;
  for (std::uint64_t s = 0; s < 4; ++s) cohort.centroids.push_back(testing::shifted(ubm, 0.5, s));
  const SpeakerModel claimed{testing::shifted(ubm, 0.5, 9), "ubm"};
  const FeatureMatrix x = testing::random_features(25, 2, 3);

  const ScoreVector sv = score_vector(x, claimed, ubm, cohort);
  CHECK(sv.s_cohort.size() == 4);
  CHECK(sv.s_claimed == avg_loglik(claimed.gmm, x));
  CHECK(sv.s_ubm == avg_loglik(ubm, x));
  for (std::size_t k = 0; k < 4; ++k) CHECK(sv.s_cohort[k] == avg_loglik(cohort.centroids[k], x));

  const ScoreVector same = score_vector(x, SpeakerModel{ubm, "ubm"}, ubm, cohort);
  CHECK(same.s_claimed == same.s_ubm);
  CHECK_THROWS_AS(score_vector(testing::random_features(5, 3, 0), claimed, ubm, cohort),
                  InvalidInput);
}

TEST_CASE("feat_norm arithmetic, floor and errors") {
  CHECK(feat_norm(sv_of(2.0, {0.5, 1.5})) == doctest::Approx(2.0));
  CHECK(feat_norm(sv_of(1.0, {0.5, 1.5})) == 0.0);
  const double flat = feat_norm(sv_of(3.0, {1.0, 1.0, 1.0}));
  CHECK(std::isfinite(flat));
  CHECK(flat == doctest::Approx(2.0 / kNormSigmaFloor));
  CHECK_THROWS_AS(feat_norm(sv_of(1.0, {0.5})), InvalidInput);
}

TEST_CASE("feat_norm is invariant to a common shift") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    ScoreVector sv = random_sv(rng, 10);
    ScoreVector moved = sv;
    moved.s_claimed += 37.5;
    for (double& s : moved.s_cohort) s += 37.5;
    CHECK(feat_norm(moved) == doctest::Approx(feat_norm(sv)).epsilon(1e-9));
  }
}

TEST_CASE("feat_rank_position examples and bounds") {
  CHECK(feat_rank_position(sv_of(5.0, {1, 2, 3})) == 1);
  CHECK(feat_rank_position(sv_of(-1.0, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9})) == 11);
  CHECK(feat_rank_position(sv_of(4.0, {1, 4, 3})) == 1);
  CHECK(feat_rank_position(sv_of(2.5, {1, 4, 3})) == 3);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const ScoreVector sv = random_sv(rng, 10);
    const auto r = feat_rank_position(sv);
    CHECK(r >= 1);
    CHECK(r <= 11);
    if (sv.s_claimed > *std::max_element(sv.s_cohort.begin(), sv.s_cohort.end())) CHECK(r == 1);
  }
}

TEST_CASE("feat_rank_diff arithmetic, sorting and permutation invariance") {
  CHECK(feat_rank_diff(sv_of(5.0, {1, 9, 3})) == std::vector<double>{-4, -2, 4});
  for (double d : feat_rank_diff(sv_of(100.0, {1, 9, 3}))) CHECK(d < 0.0);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    ScoreVector sv = random_sv(rng, 8);
    const auto d = feat_rank_diff(sv);
    CHECK(std::is_sorted(d.begin(), d.end()));
    std::vector<double> expected;
    for (double s : sv.s_cohort) expected.push_back(s - sv.s_claimed);
    std::sort(expected.begin(), expected.end());
    CHECK(d == expected);
    std::shuffle(sv.s_cohort.begin(), sv.s_cohort.end(), rng);
    CHECK(feat_rank_diff(sv) == d);
  }
}

TEST_CASE("assemble dimensions and layout") {
  std::mt19937_64 rng(8);
  const ScoreVector sv = random_sv(rng, 10);
  CHECK(assemble(sv, Condition::C1).values.size() == 2);
  CHECK(assemble(sv, Condition::C3).values.size() == 11);
  CHECK(assemble(sv, Condition::C7).values.size() == 13);
  for (std::size_t k : {2u, 5u, 10u, 17u}) {
    const ScoreVector s = random_sv(rng, k);
    for (Condition c : kAllConditions)
      CHECK(assemble(s, c).values.size() == assembled_dim(c, k));
  }
  const auto f = assemble(sv, Condition::C7).values;
  CHECK(f[0] == sv.llr());
  CHECK(f[1] == feat_norm(sv));
  CHECK(f[2] == static_cast<double>(feat_rank_position(sv)));
  const auto d = feat_rank_diff(sv);
  CHECK(std::equal(d.begin(), d.end(), f.begin() + 3));
  const auto c6 = assemble(sv, Condition::C6).values;
  CHECK(c6[1] == static_cast<double>(feat_rank_position(sv)));
}

TEST_CASE("condition labels") {
  CHECK(parse_condition("C5") == Condition::C5);
  CHECK(to_string(Condition::C2) == "C2");
  CHECK_THROWS_AS(parse_condition("C8"), InvalidInput);
  CHECK_THROWS_AS(parse_condition("X1"), InvalidInput);
  CHECK_THROWS_AS(parse_condition(""), InvalidInput);
}

TEST_CASE("imbalance_filter keeps genuine trials and the top two imposters") {
  std::vector<FeatureTrial> trials = {
      ft("u1", TrialLabel::kImposter, 0.3), ft("u1", TrialLabel::kGenuine, 0.1),
      ft("u1", TrialLabel::kImposter, 0.9), ft("u1", TrialLabel::kImposter, -0.1),
      ft("u1", TrialLabel::kImposter, 0.5), ft("u1", TrialLabel::kImposter, 0.2),
      ft("u2", TrialLabel::kImposter, -3.0), ft("u2", TrialLabel::kGenuine, 1.0)};
  const auto kept = imbalance_filter(trials);
  std::vector<double> imposters;
  std::size_t genuine = 0;
  for (const auto& t : kept) {
    if (t.trial.label == TrialLabel::kGenuine) {
      ++genuine;
    } else if (t.trial.utterance_id == "u1") {
      imposters.push_back(t.s_claimed);
    }
  }
  CHECK(genuine == 2);
  CHECK(imposters == std::vector<double>{0.9, 0.5});
  CHECK(std::count_if(kept.begin(), kept.end(),
                      [](const auto& t) { return t.trial.utterance_id == "u2"; }) == 2);
}
