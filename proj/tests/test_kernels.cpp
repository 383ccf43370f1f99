// tests/test_kernels.cpp

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
#include <omp.h>

#include "cohortsv/kernels.hpp"
#include "test_util.hpp"

using namespace cohortsv;

TEST_CASE("omp total log-likelihood matches the serial reference") {
  const DiagGmm g = testing::random_gmm(8, 5, 3);
  for (std::size_t frames : {1u, 7u, 511u, 512u, 513u, 2000u}) {
    const FeatureMatrix x = testing::random_features(frames, 5, frames);
    const double ref = kernels::serial::total_loglik(g, x);
    CHECK(kernels::omp::total_loglik(g, x) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("omp statistics match the serial reference") {
  const DiagGmm g = testing::random_gmm(6, 3, 11);
  const FeatureMatrix x = testing::random_features(1700, 3, 5);
  const auto ref = kernels::serial::accumulate(g, x, true);
  const auto par = kernels::omp::accumulate(g, x, true);
  CHECK(par.loglik == doctest::Approx(ref.loglik).epsilon(1e-12));
  for (std::size_t i = 0; i < ref.occupancy.size(); ++i)
    CHECK(par.occupancy[i] == doctest::Approx(ref.occupancy[i]).epsilon(1e-12));
  for (std::size_t k = 0; k < ref.first.size(); ++k) {
    CHECK(par.first[k] == doctest::Approx(ref.first[k]).epsilon(1e-10));
    CHECK(par.second[k] == doctest::Approx(ref.second[k]).epsilon(1e-10));
  }
  double occ = 0.0;
  for (double n : par.occupancy) occ += n;
  CHECK(occ == doctest::Approx(1700.0).epsilon(1e-12));
}

TEST_CASE("omp kernels are bit-identical across thread counts") {
  const DiagGmm g = testing::random_gmm(4, 4, 2);
  const FeatureMatrix x = testing::random_features(3000, 4, 9);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = kernels::omp::total_loglik(g, x);
  const auto stats_one = kernels::omp::accumulate(g, x, true);
  omp_set_num_threads(4);
  const double four = kernels::omp::total_loglik(g, x);
  const auto stats_four = kernels::omp::accumulate(g, x, true);
  omp_set_num_threads(saved);
  CHECK(one == four);
  CHECK(stats_one.first == stats_four.first);
  CHECK(stats_one.second == stats_four.second);
  CHECK(stats_one.occupancy == stats_four.occupancy);
}

TEST_CASE("first-order-only statistics leave second empty") {
  const DiagGmm g = testing::random_gmm(2, 2, 1);
  const auto s = kernels::omp::accumulate(g, testing::random_features(10, 2, 1), false);
  CHECK(s.second.empty());
  CHECK(s.first.size() == 4);
}
