// include/cohortsv/gmm.hpp

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

#ifndef COHORTSV_GMM_HPP
#define COHORTSV_GMM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cohortsv/feature_matrix.hpp"

namespace cohortsv {

/// Diagonal-covariance Gaussian mixture. Means and variances are stored
/// component-major (M x dim). Immutable after construction, so concurrent
/// scoring from several threads is safe.
class DiagGmm {
 public:
  DiagGmm() = default;
  /// Validates: weights nonnegative summing to 1 within 1e-9, variances
  /// strictly positive, every parameter finite, shapes consistent.
  DiagGmm(std::vector<double> weights, std::vector<double> means,
          std::vector<double> variances);

  std::size_t components() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& variances() const { return variances_; }

  std::span<const double> mean(std::size_t i) const {
    return {means_.data() + i * dim_, dim_};
  }
  std::span<const double> variance(std::size_t i) const {
    return {variances_.data() + i * dim_, dim_};
  }
  std::span<const double> inv_variance(std::size_t i) const {
    return {inv_variances_.data() + i * dim_, dim_};
  }
  /// log w_i - 0.5 * (dim * log(2 pi) + sum_d log var_id); -inf when w_i == 0.
  double log_const(std::size_t i) const { return log_consts_[i]; }

  /// Same weights and variances, replaced means. Used by MAP and clustering.
  DiagGmm with_means(std::vector<double> means) const;

  friend bool operator==(const DiagGmm& a, const DiagGmm& b) {
    return a.dim_ == b.dim_ && a.weights_ == b.weights_ && a.means_ == b.means_ &&
           a.variances_ == b.variances_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> weights_;
  std::vector<double> means_;
  std::vector<double> variances_;
  std::vector<double> inv_variances_;
  std::vector<double> log_consts_;
};

/// A MAP-adapted speaker GMM. Weights and variances are the UBM's.
struct SpeakerModel {
  DiagGmm gmm;
  std::string ubm_ref;
};

struct EmOptions {
  std::size_t components = 32;
  std::size_t iterations = 20;
  std::uint64_t seed = 0;
  /// Stop once the per-iteration gain in total log-likelihood drops below this.
  double min_gain = 1e-6;
  /// Variance floor as a fraction of the global per-dimension variance.
  double variance_floor_ratio = 1e-4;
};

/// Trains a UBM with EM from K-means++ seeded means, global variances and
/// uniform weights. When `trace` is non-null it receives the total data
/// log-likelihood evaluated before each M-step.
DiagGmm em_train(const FeatureMatrix& data, const EmOptions& options,
                 std::vector<double>* trace = nullptr);

/// Mean-only MAP adaptation with relevance factor `relevance`.
SpeakerModel map_adapt(const DiagGmm& ubm, const FeatureMatrix& data, double relevance,
                       std::string ubm_ref = "ubm");

/// Frame-averaged log-likelihood, computed with log-sum-exp.
double avg_loglik(const DiagGmm& model, const FeatureMatrix& utterance);

/// avg_loglik(speaker) - avg_loglik(ubm).
double llr(const SpeakerModel& speaker, const DiagGmm& ubm, const FeatureMatrix& utterance);

/// Per-dimension ML variance of all frames.
std::vector<double> global_variance(const FeatureMatrix& data);

}  // namespace cohortsv

#endif  // COHORTSV_GMM_HPP
