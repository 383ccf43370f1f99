// src/gmm.cpp

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

#include "cohortsv/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "cohortsv/error.hpp"
#include "cohortsv/kernels.hpp"

namespace cohortsv {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require_same_dim(const DiagGmm& model, const FeatureMatrix& data, const char* who) {
  if (model.dim() != data.dim())
    throw InvalidInput(std::string(who) + ": model dim " + std::to_string(model.dim()) +
                       " != feature dim " + std::to_string(data.dim()));
}

// K-means++ seeding over frames: first pick uniform, then proportional to the
// squared distance to the nearest chosen mean.
std::vector<double> kmeanspp_frames(const FeatureMatrix& data, std::size_t k,
                                    std::mt19937_64& rng) {
  const std::size_t n = data.frames();
  const std::size_t d = data.dim();
  std::vector<double> centers;
  centers.reserve(k * d);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());

  auto add_center = [&](std::size_t t) {
    const auto x = data.row(t);
    centers.insert(centers.end(), x.begin(), x.end());
    const double* c = centers.data() + centers.size() - d;
    for (std::size_t s = 0; s < n; ++s) {
      const auto y = data.row(s);
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = y[j] - c[j];
        acc += diff * diff;
      }
      dist[s] = std::min(dist[s], acc);
    }
  };

  add_center(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  while (centers.size() < k * d) {
    double total = 0.0;
    for (double v : dist) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      pick = n - 1;
      for (std::size_t s = 0; s < n; ++s) {
        if (u < dist[s]) {
          pick = s;
          break;
        }
        u -= dist[s];
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    add_center(pick);
  }
  return centers;
}

}  // namespace

DiagGmm::DiagGmm(std::vector<double> weights, std::vector<double> means,
                 std::vector<double> variances)
    : weights_(std::move(weights)), means_(std::move(means)), variances_(std::move(variances)) {
  const std::size_t m = weights_.size();
  if (m == 0) throw InvalidInput("DiagGmm: no components");
  if (means_.empty() || means_.size() % m != 0)
    throw InvalidInput("DiagGmm: means size is not a multiple of the component count");
  dim_ = means_.size() / m;
  if (variances_.size() != means_.size())
    throw InvalidInput("DiagGmm: variances and means differ in size");
  if (!all_finite(weights_) || !all_finite(means_) || !all_finite(variances_))
    throw InvalidInput("DiagGmm: non-finite parameter");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw InvalidInput("DiagGmm: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidInput("DiagGmm: weights sum to " + std::to_string(sum));
  for (double v : variances_)
    if (!(v > 0.0)) throw InvalidInput("DiagGmm: non-positive variance");

  inv_variances_.resize(variances_.size());
  log_consts_.resize(m);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < m; ++i) {
    double log_det = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double v = variances_[i * dim_ + j];
      inv_variances_[i * dim_ + j] = 1.0 / v;
      log_det += std::log(v);
    }
    log_consts_[i] = std::log(weights_[i]) - 0.5 * (static_cast<double>(dim_) * log_2pi + log_det);
  }
}

DiagGmm DiagGmm::with_means(std::vector<double> means) const {
  if (means.size() != means_.size()) throw InvalidInput("DiagGmm::with_means: size mismatch");
  return DiagGmm(weights_, std::move(means), variances_);
}

std::vector<double> global_variance(const FeatureMatrix& data) {
  const std::size_t d = data.dim();
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (std::size_t t = 0; t < data.frames(); ++t) {
    const auto x = data.row(t);
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[j];
  }
  for (double& v : mean) v /= static_cast<double>(data.frames());
  for (std::size_t t = 0; t < data.frames(); ++t) {
    const auto x = data.row(t);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x[j] - mean[j];
      var[j] += diff * diff;
    }
  }
  for (double& v : var) v /= static_cast<double>(data.frames());
  return var;
}

DiagGmm em_train(const FeatureMatrix& data, const EmOptions& options,
                 std::vector<double>* trace) {
  const std::size_t m = options.components;
  if (data.empty()) throw InvalidInput("em_train: empty data");
  if (m == 0) throw InvalidInput("em_train: components must be >= 1");
  if (options.iterations == 0) throw InvalidInput("em_train: iterations must be >= 1");
  if (data.frames() < m)
    throw InvalidInput("em_train: " + std::to_string(data.frames()) + " frames for " +
                       std::to_string(m) + " components");
  if (!(options.variance_floor_ratio > 0.0))
    throw InvalidInput("em_train: variance floor ratio must be positive");

  const std::size_t d = data.dim();
  const std::vector<double> gvar = global_variance(data);
  std::vector<double> floor(d);
  for (std::size_t j = 0; j < d; ++j)
    floor[j] = std::max(options.variance_floor_ratio * gvar[j],
                        std::numeric_limits<double>::min());

  std::mt19937_64 rng(options.seed);
  std::vector<double> variances(m * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) variances[i * d + j] = std::max(gvar[j], floor[j]);
  DiagGmm model(std::vector<double>(m, 1.0 / static_cast<double>(m)),
                kmeanspp_frames(data, m, rng), std::move(variances));

  if (trace) trace->clear();
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < options.iterations; ++it) {
    const kernels::SuffStats stats = kernels::omp::accumulate(model, data, true);
    if (trace) trace->push_back(stats.loglik);
    if (it > 0 && stats.loglik - previous < options.min_gain) break;
    previous = stats.loglik;

    double total_occ = 0.0;
    for (double n : stats.occupancy) total_occ += n;
    std::vector<double> weights(m), means(model.means()), vars(model.variances());
    for (std::size_t i = 0; i < m; ++i) {
      const double n = stats.occupancy[i];
      weights[i] = n / total_occ;
      // A component with no support keeps its Gaussian and drops to weight 0.
      if (!(n > 0.0)) continue;
      for (std::size_t j = 0; j < d; ++j) {
        const double mu = stats.first[i * d + j] / n;
        const double var = stats.second[i * d + j] / n - mu * mu;
        means[i * d + j] = mu;
        vars[i * d + j] = std::max(var, floor[j]);
      }
    }
    model = DiagGmm(std::move(weights), std::move(means), std::move(vars));
  }
  return model;
}

SpeakerModel map_adapt(const DiagGmm& ubm, const FeatureMatrix& data, double relevance,
                       std::string ubm_ref) {
  require_same_dim(ubm, data, "map_adapt");
  if (!(relevance >= 0.0) || !std::isfinite(relevance))
    throw InvalidInput("map_adapt: relevance must be finite and >= 0");
  const kernels::SuffStats stats = kernels::omp::accumulate(ubm, data, false);
  const std::size_t d = ubm.dim();
  std::vector<double> means = ubm.means();
  for (std::size_t i = 0; i < ubm.components(); ++i) {
    const double n = stats.occupancy[i];
    if (!(n > 0.0)) continue;
    const double alpha = n / (n + relevance);
    for (std::size_t j = 0; j < d; ++j) {
      const double data_mean = stats.first[i * d + j] / n;
      means[i * d + j] = alpha * data_mean + (1.0 - alpha) * means[i * d + j];
    }
  }
  return SpeakerModel{ubm.with_means(std::move(means)), std::move(ubm_ref)};
}

double avg_loglik(const DiagGmm& model, const FeatureMatrix& utterance) {
  require_same_dim(model, utterance, "avg_loglik");
  return kernels::omp::total_loglik(model, utterance) / static_cast<double>(utterance.frames());
}

double llr(const SpeakerModel& speaker, const DiagGmm& ubm, const FeatureMatrix& utterance) {
  return avg_loglik(speaker.gmm, utterance) - avg_loglik(ubm, utterance);
}

}  // namespace cohortsv
