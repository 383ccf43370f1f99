// tests/test_gmm.cpp

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
#include <limits>
#include <numbers>
#include <random>

#include "cohortsv/error.hpp"
#include "cohortsv/gmm.hpp"
#include "test_util.hpp"

using namespace cohortsv;

namespace {

// Posterior-weighted data means computed directly from densities.
std::vector<double> posterior_means(const DiagGmm& g, const FeatureMatrix& x,
                                    std::vector<double>& occupancy) {
  const std::size_t m = g.components(), d = g.dim();
  std::vector<double> sums(m * d, 0.0);
  occupancy.assign(m, 0.0);
  for (std::size_t t = 0; t < x.frames(); ++t) {
    std::vector<double> p(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double lp = std::log(g.weights()[i]);
      for (std::size_t j = 0; j < d; ++j) {
        const double v = g.variance(i)[j];
        const double diff = x.row(t)[j] - g.mean(i)[j];
        lp += -0.5 * std::log(2.0 * std::numbers::pi * v) - 0.5 * diff * diff / v;
      }
      p[i] = std::exp(lp);
      total += p[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      occupancy[i] += p[i] / total;
      for (std::size_t j = 0; j < d; ++j) sums[i * d + j] += p[i] / total * x.row(t)[j];
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) sums[i * d + j] /= occupancy[i];
  return sums;
}

FeatureMatrix one_d(const std::vector<double>& v) {
  std::vector<float> f(v.begin(), v.end());
  return FeatureMatrix(v.size(), 1, std::move(f));
}

}  // namespace

TEST_CASE("DiagGmm validates its invariants") {
  CHECK_THROWS_AS(DiagGmm({0.5, 0.4}, {0, 0}, {1, 1}), InvalidInput);
  CHECK_THROWS_AS(DiagGmm({1.0}, {0}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(DiagGmm({1.0}, {std::nan("")}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(DiagGmm({1.0}, {0, 0}, {1}), InvalidInput);
  CHECK_NOTHROW(DiagGmm({0.25, 0.75}, {0, 1}, {1, 2}));
}

TEST_CASE("FeatureMatrix rejects non-finite values and bad shapes") {
  CHECK_THROWS_AS(FeatureMatrix(1, 2, {0.0f, std::numeric_limits<float>::infinity()}), InvalidInput);
  CHECK_THROWS_AS(FeatureMatrix(0, 2, {}), InvalidInput);
  CHECK_THROWS_AS(FeatureMatrix(2, 2, {1, 2, 3}), InvalidInput);
}

TEST_CASE("avg_loglik analytic single Gaussian") {
  const DiagGmm g({1.0}, {0.0}, {1.0});
  CHECK(avg_loglik(g, one_d({0.0})) == doctest::Approx(-0.918938533204673).epsilon(1e-14));
}

TEST_CASE("avg_loglik is unchanged by duplicating frames") {
  const DiagGmm g = testing::random_gmm(4, 3, 1);
  const FeatureMatrix x = testing::random_features(50, 3, 2);
  CHECK(avg_loglik(g, x.concat(x)) == doctest::Approx(avg_loglik(g, x)).epsilon(1e-13));
}

TEST_CASE("two identical half-weight components equal the single component") {
  const DiagGmm single({1.0}, {0.3, -1.0}, {0.7, 2.0});
  const DiagGmm twin({0.5, 0.5}, {0.3, -1.0, 0.3, -1.0}, {0.7, 2.0, 0.7, 2.0});
  const FeatureMatrix x = testing::random_features(20, 2, 4);
  CHECK(avg_loglik(twin, x) == doctest::Approx(avg_loglik(single, x)).epsilon(1e-13));
}

TEST_CASE("avg_loglik matches direct density evaluation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DiagGmm g = testing::random_gmm(5, 3, seed);
    const FeatureMatrix x = testing::random_features(40, 3, seed + 100);
    CHECK(std::abs(avg_loglik(g, x) - testing::direct_avg_loglik(g, x)) < 1e-6);
  }
}

TEST_CASE("avg_loglik stays finite where direct densities underflow") {
  const DiagGmm g = testing::random_gmm(4, 39, 5);
  const FeatureMatrix far = testing::random_features(10, 39, 6, 40.0);
  CHECK(std::isfinite(avg_loglik(g, far)));
}

TEST_CASE("avg_loglik rejects a dimension mismatch") {
  CHECK_THROWS_AS(avg_loglik(testing::random_gmm(2, 3, 0), testing::random_features(5, 4, 0)),
                  InvalidInput);
}

TEST_CASE("em_train with one component is the closed-form Gaussian") {
  const FeatureMatrix x = testing::random_features(300, 3, 8, 2.0);
  const DiagGmm g = em_train(x, {1, 10, 5});
  REQUIRE(g.components() == 1);
  CHECK(g.weights()[0] == 1.0);
  std::vector<double> mean(3, 0.0), var(3, 0.0);
  for (std::size_t t = 0; t < 300; ++t)
    for (std::size_t j = 0; j < 3; ++j) mean[j] += x.row(t)[j] / 300.0;
  for (std::size_t t = 0; t < 300; ++t)
    for (std::size_t j = 0; j < 3; ++j) var[j] += std::pow(x.row(t)[j] - mean[j], 2) / 300.0;
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(g.mean(0)[j] == doctest::Approx(mean[j]).epsilon(1e-9));
    CHECK(g.variance(0)[j] == doctest::Approx(var[j]).epsilon(1e-9));
  }
}

TEST_CASE("em_train recovers a well separated two-component 1-D mixture") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v;
  for (int i = 0; i < 500; ++i) v.push_back(-5.0 + n(rng));
  for (int i = 0; i < 500; ++i) v.push_back(5.0 + n(rng));
  const DiagGmm g = em_train(one_d(v), {2, 50, 7});
  const std::size_t lo = g.mean(0)[0] < g.mean(1)[0] ? 0 : 1;
  CHECK(std::abs(g.mean(lo)[0] + 5.0) < 0.3);
  CHECK(std::abs(g.mean(1 - lo)[0] - 5.0) < 0.3);
  CHECK(std::abs(g.weights()[0] - 0.5) < 0.05);
  CHECK(std::abs(g.weights()[1] - 0.5) < 0.05);
}

TEST_CASE("em_train log-likelihood never decreases and runs are deterministic") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const FeatureMatrix x = testing::clustered_features(800, 3, 5, seed);
    std::vector<double> trace;
    const DiagGmm a = em_train(x, {6, 30, seed}, &trace);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] - trace[i - 1] >= -1e-8);
    CHECK(a == em_train(x, {6, 30, seed}));
  }
}

TEST_CASE("em_train respects the variance floor") {
  std::vector<float> v;
  for (int t = 0; t < 200; ++t) {
    v.push_back(static_cast<float>(t % 7));
    v.push_back(3.0f);  // constant dimension
  }
  const FeatureMatrix x(200, 2, v);
  const DiagGmm g = em_train(x, {3, 20, 1});
  for (double var : g.variances()) CHECK(var > 0.0);
  const auto gvar = global_variance(x);
  for (std::size_t i = 0; i < g.components(); ++i) CHECK(g.variance(i)[0] >= 1e-4 * gvar[0]);
}

TEST_CASE("em_train input errors") {
  const FeatureMatrix x = testing::random_features(3, 2, 0);
  CHECK_THROWS_AS(em_train(x, {4, 10, 0}), InvalidInput);
  CHECK_THROWS_AS(em_train(x, {2, 0, 0}), InvalidInput);
}

TEST_CASE("map_adapt limits and invariants") {
  const DiagGmm ubm = testing::random_gmm(4, 2, 21);
  const FeatureMatrix x = testing::random_features(200, 2, 22, 1.5);

  SUBCASE("huge relevance keeps the UBM means") {
    const SpeakerModel s = map_adapt(ubm, x, 1e12);
    for (std::size_t k = 0; k < ubm.means().size(); ++k)
      CHECK(std::abs(s.gmm.means()[k] - ubm.means()[k]) < 1e-6);
  }
  SUBCASE("zero relevance gives the posterior data means") {
    std::vector<double> occ;
    const auto expected = posterior_means(ubm, x, occ);
    const SpeakerModel s = map_adapt(ubm, x, 0.0);
    for (std::size_t k = 0; k < expected.size(); ++k)
      CHECK(std::abs(s.gmm.means()[k] - expected[k]) < 1e-9);
  }
  SUBCASE("adapted means lie between UBM and data means; weights/variances copied") {
    std::vector<double> occ;
    const auto data_mean = posterior_means(ubm, x, occ);
    const SpeakerModel s = map_adapt(ubm, x, 16.0);
    CHECK(s.gmm.weights() == ubm.weights());
    CHECK(s.gmm.variances() == ubm.variances());
    for (std::size_t k = 0; k < data_mean.size(); ++k) {
      const double lo = std::min(ubm.means()[k], data_mean[k]) - 1e-9;
      const double hi = std::max(ubm.means()[k], data_mean[k]) + 1e-9;
      CHECK(s.gmm.means()[k] >= lo);
      CHECK(s.gmm.means()[k] <= hi);
    }
  }
  SUBCASE("unoccupied components keep the UBM mean exactly") {
    const DiagGmm far({0.5, 0.5}, {0.0, 1e4}, {1.0, 1.0});
    const SpeakerModel s = map_adapt(far, one_d({0.1, -0.2, 0.4}), 0.0);
    CHECK(s.gmm.means()[1] == 1e4);
    CHECK(s.gmm.means()[0] != 0.0);
  }
  CHECK_THROWS_AS(map_adapt(ubm, x, -1.0), InvalidInput);
  CHECK_THROWS_AS(map_adapt(ubm, testing::random_features(5, 3, 0), 16.0), InvalidInput);
}

TEST_CASE("llr sign, identity and antisymmetry") {
  const DiagGmm ubm = testing::random_gmm(4, 3, 31);
  const SpeakerModel same{ubm, "ubm"};
  const FeatureMatrix x = testing::random_features(30, 3, 32);
  CHECK(llr(same, ubm, x) == 0.0);

  // Utterance drawn from a strongly shifted single-Gaussian speaker model.
  const DiagGmm ubm1({1.0}, {0.0, 0.0}, {1.0, 1.0});
  const SpeakerModel spk{ubm1.with_means({2.0, -2.0}), "ubm"};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<float> v;
  for (int t = 0; t < 100; ++t) {
    v.push_back(static_cast<float>(2.0 + n(rng)));
    v.push_back(static_cast<float>(-2.0 + n(rng)));
  }
  const FeatureMatrix own(100, 2, v);
  CHECK(llr(spk, ubm1, own) > 0.0);
  CHECK(llr(spk, ubm1, own) == -llr(SpeakerModel{ubm1, ""}, spk.gmm, own));
}
