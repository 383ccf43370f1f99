// tests/test_eval.cpp

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

#include <cmath>
#include <random>

#include "cohortsv/error.hpp"
#include "cohortsv/eval.hpp"
#include "eval_oracle.hpp"

using namespace cohortsv;

namespace {

constexpr TrialLabel G = TrialLabel::kGenuine;
constexpr TrialLabel I = TrialLabel::kImposter;

void random_trials(std::mt19937_64& rng, std::size_t n, std::vector<double>& scores,
                   std::vector<TrialLabel>& labels, bool quantize) {
  std::normal_distribution<double> nd(0.0, 1.0);
  scores.clear();
  labels.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const bool genuine = i == 0 || (i != 1 && (rng() & 3) == 0);
    double s = nd(rng) + (genuine ? 1.5 : 0.0);
    if (quantize) s = std::round(s * 4.0) / 4.0;  // forces ties
    scores.push_back(s);
    labels.push_back(genuine ? G : I);
  }
}

}  // namespace

TEST_CASE("EER hand cases") {
  const std::vector<double> sep{0.9, 0.8, 0.1, 0.2};
  const std::vector<TrialLabel> lab{G, G, I, I};
  CHECK(compute_eer(sep, lab).eer == 0.0);

  const std::vector<double> mixed{0.9, 0.8, 0.95, 0.1};
  const auto r = compute_eer(mixed, lab);
  CHECK(r.eer == 0.5);
  CHECK(r.n_target == 2);
  CHECK(r.n_nontarget == 2);
}

TEST_CASE("EER equals the quadratic sweep") {
  std::mt19937_64 rng(1);
  std::vector<double> s;
  std::vector<TrialLabel> l;
  for (int rep = 0; rep < 40; ++rep) {
    random_trials(rng, 2 + rng() % 300, s, l, rep % 2 == 0);
    CHECK(compute_eer(s, l).eer == testing::brute_force_eer(s, l));
  }
}

TEST_CASE("DET points match the quadratic recount and are monotone") {
  std::mt19937_64 rng(2);
  std::vector<double> s;
  std::vector<TrialLabel> l;
  for (int rep = 0; rep < 20; ++rep) {
    random_trials(rng, 2 + rng() % 200, s, l, rep % 3 == 0);
    const auto pts = det_curve(s, l);
    const auto ref = testing::brute_force_det(s, l);
    REQUIRE(pts.size() == ref.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(pts[k].threshold == ref[k].threshold);
      CHECK(pts[k].far == ref[k].far);
      CHECK(pts[k].frr == ref[k].frr);
      if (k > 0) {
        CHECK(pts[k].far <= pts[k - 1].far);
        CHECK(pts[k].frr >= pts[k - 1].frr);
      }
    }
    CHECK(pts.front().far == 1.0);
    CHECK(pts.front().frr == 0.0);
    CHECK(pts.back().far == 0.0);
    CHECK(pts.back().frr == 1.0);
  }
}

TEST_CASE("EER symmetry under negation and monotone transforms") {
  std::mt19937_64 rng(3);
  std::vector<double> s;
  std::vector<TrialLabel> l;
  for (int rep = 0; rep < 20; ++rep) {
    random_trials(rng, 50 + rng() % 100, s, l, false);
    const double eer = compute_eer(s, l).eer;
    std::vector<double> neg, warped;
    std::vector<TrialLabel> swapped;
    for (std::size_t i = 0; i < s.size(); ++i) {
      neg.push_back(-s[i]);
      swapped.push_back(l[i] == G ? I : G);
      warped.push_back(std::exp(2.0 * s[i]) + 3.0);
    }
    CHECK(compute_eer(neg, swapped).eer == doctest::Approx(eer).epsilon(1e-12));
    CHECK(compute_eer(warped, l).eer == eer);
  }
}

TEST_CASE("EER input errors") {
  CHECK_THROWS_AS(compute_eer(std::vector<double>{1, 2}, std::vector<TrialLabel>{G, G}),
                  InvalidInput);
  CHECK_THROWS_AS(compute_eer(std::vector<double>{1, 2}, std::vector<TrialLabel>{G}),
                  InvalidInput);
  CHECK_THROWS_AS(det_curve(std::vector<double>{1}, std::vector<TrialLabel>{I}), InvalidInput);
}

TEST_CASE("rank histogram") {
  CHECK(rank_histogram(std::vector<std::size_t>{1, 1, 2}, 3) == std::vector<std::size_t>{2, 1, 0});
  CHECK(rank_histogram(std::vector<std::size_t>{}, 4) == std::vector<std::size_t>(4, 0));
  std::vector<std::size_t> pos{3, 1, 4, 1, 5, 9, 2, 6, 5, 3};
  const auto h = rank_histogram(pos, 11);
  std::size_t total = 0;
  for (auto c : h) total += c;
  CHECK(total == pos.size());
  CHECK_THROWS_AS(rank_histogram(std::vector<std::size_t>{0}, 3), InvalidInput);
  CHECK_THROWS_AS(rank_histogram(std::vector<std::size_t>{4}, 3), InvalidInput);
}
