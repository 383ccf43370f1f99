// include/cohortsv/cohort.hpp

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

#ifndef COHORTSV_COHORT_HPP
#define COHORTSV_COHORT_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cohortsv/gmm.hpp"

namespace cohortsv {

/// Which per-component Gaussian term enters the weighted distance.
enum class KlForm {
  /// 0.5 * dmu' (inv(S_a) + inv(S_b)) dmu: the symmetric-KL mean term.
  kSymmetric,
  /// 0.5 * dmu' (inv(S_a) - inv(S_b)) dmu: identically zero for models
  /// sharing variances; kept only for comparison experiments.
  kDifference,
};

/// sum_i w_i * KL_i(a, b) over index-matched components. Both mixtures must
/// have the same component count, dim and weights.
double weighted_kl(const DiagGmm& a, const DiagGmm& b, KlForm form = KlForm::kSymmetric);

/// Cluster centroids used as cohort models.
struct Cohort {
  std::vector<DiagGmm> centroids;
  std::size_t size() const { return centroids.size(); }
};

struct ClusterAssignment {
  std::vector<std::size_t> labels;
  /// Mean weighted-KL distance of each model to its centroid.
  double cost = 0.0;
};

struct KmeansOptions {
  std::size_t k = 10;
  std::size_t iterations = 50;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
};

struct KmeansResult {
  Cohort cohort;
  ClusterAssignment assignment;
  /// Cost after every assignment step of the best restart.
  std::vector<double> cost_trace;
};

/// Lloyd K-means over speaker models under weighted_kl. Centroids average the
/// member means per component and inherit weights and variances from the
/// models. Seeding is K-means++; the best of `restarts` runs is returned.
KmeansResult kmeans_gmm(std::span<const DiagGmm> models, const KmeansOptions& options);

/// Mean distance of each model to the centroid selected by `labels`.
double clustering_cost(std::span<const DiagGmm> models, const Cohort& cohort,
                       std::span<const std::size_t> labels);

/// (k, J) for k = 1..k_max. Each k keeps the best of the random restarts and
/// of one run warm-started from the k-1 solution plus the worst-fit model,
/// which makes the curve non-increasing.
std::vector<std::pair<std::size_t, double>> cost_curve(std::span<const DiagGmm> models,
                                                       std::size_t k_max,
                                                       const KmeansOptions& options);

}  // namespace cohortsv

#endif  // COHORTSV_COHORT_HPP
