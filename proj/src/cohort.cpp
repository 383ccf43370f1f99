// src/cohort.cpp

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

#include "cohortsv/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cohortsv/error.hpp"

namespace cohortsv {

namespace {

void require_compatible(const DiagGmm& a, const DiagGmm& b) {
  if (a.components() != b.components() || a.dim() != b.dim())
    throw InvalidInput("weighted_kl: component count or dim mismatch (" +
                       std::to_string(a.components()) + "x" + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.components()) + "x" + std::to_string(b.dim()) + ")");
  for (std::size_t i = 0; i < a.components(); ++i)
    if (std::abs(a.weights()[i] - b.weights()[i]) > 1e-12)
      throw InvalidInput("weighted_kl: mixture weights differ at component " + std::to_string(i));
}

void require_models(std::span<const DiagGmm> models, std::size_t k) {
  if (models.empty()) throw InvalidInput("kmeans_gmm: no models");
  if (k == 0 || k > models.size())
    throw InvalidInput("kmeans_gmm: k=" + std::to_string(k) + " outside [1, " +
                       std::to_string(models.size()) + "]");
  for (const auto& m : models) {
    require_compatible(models.front(), m);
    if (m.variances() != models.front().variances())
      throw InvalidInput("kmeans_gmm: models do not share variances");
  }
}

// Centroid whose means are the per-coordinate average of its members.
DiagGmm average_model(std::span<const DiagGmm> models, std::span<const std::size_t> members) {
  std::vector<double> sum(models.front().means().size(), 0.0);
  for (std::size_t idx : members) {
    const auto& mu = models[idx].means();
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += mu[k];
  }
  const double n = static_cast<double>(members.size());
  for (double& v : sum) v /= n;
  return models.front().with_means(std::move(sum));
}

struct Fit {
  std::vector<DiagGmm> centroids;
  std::vector<std::size_t> labels;
  double cost = 0.0;
  std::vector<double> trace;
};

// Nearest centroid for every model; distances written to `dist`.
void assign(std::span<const DiagGmm> models, const std::vector<DiagGmm>& centroids,
            std::vector<std::size_t>& labels, std::vector<double>& dist) {
  const auto n = static_cast<std::ptrdiff_t>(models.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double v = weighted_kl(models[s], centroids[c]);
      if (v < best) {
        best = v;
        arg = c;
      }
    }
    labels[s] = arg;
    dist[s] = best;
  }
}

double cost_of(std::span<const DiagGmm> models, const std::vector<DiagGmm>& centroids,
               std::span<const std::size_t> labels) {
  double total = 0.0;
  for (std::size_t s = 0; s < models.size(); ++s)
    total += weighted_kl(models[s], centroids[labels[s]]);
  return total / static_cast<double>(models.size());
}

Fit lloyd(std::span<const DiagGmm> models, std::vector<DiagGmm> centroids,
          std::size_t iterations) {
  const std::size_t n = models.size();
  const std::size_t k = centroids.size();
  Fit fit;
  fit.labels.assign(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> previous;
  for (std::size_t it = 0; it < std::max<std::size_t>(iterations, 1); ++it) {
    assign(models, centroids, fit.labels, dist);

    // Empty clusters take the worst-fit model from a cluster that can spare it.
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t l : fit.labels) ++counts[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t s = 0; s < n; ++s)
        if (counts[fit.labels[s]] > 1 && (far == n || dist[s] > dist[far])) far = s;
      --counts[fit.labels[far]];
      fit.labels[far] = c;
      counts[c] = 1;
      dist[far] = 0.0;
      centroids[c] = models[far];
    }

    if (it > 0 && fit.labels == previous) break;
    previous = fit.labels;

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t s = 0; s < n; ++s) members[fit.labels[s]].push_back(s);
    for (std::size_t c = 0; c < k; ++c) centroids[c] = average_model(models, members[c]);
    fit.trace.push_back(cost_of(models, centroids, fit.labels));
  }
  fit.centroids = std::move(centroids);
  fit.cost = cost_of(models, fit.centroids, fit.labels);
  return fit;
}

std::vector<DiagGmm> kmeanspp(std::span<const DiagGmm> models, std::size_t k,
                              std::mt19937_64& rng) {
  const std::size_t n = models.size();
  std::vector<DiagGmm> centroids;
  std::vector<bool> chosen(n, false);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  auto take = [&](std::size_t s) {
    chosen[s] = true;
    centroids.push_back(models[s]);
    for (std::size_t t = 0; t < n; ++t)
      dist[t] = std::min(dist[t], weighted_kl(models[t], models[s]));
  };
  take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  while (centroids.size() < k) {
    double total = 0.0;
    for (double v : dist) total += v;
    std::size_t pick = n;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (std::size_t s = 0; s < n; ++s) {
        if (dist[s] > 0.0 && u < dist[s]) {
          pick = s;
          break;
        }
        u -= dist[s];
      }
      if (pick == n)  // rounding at the tail
        for (std::size_t s = n; s-- > 0;)
          if (dist[s] > 0.0) {
            pick = s;
            break;
          }
    } else {
      // Every remaining model duplicates a chosen one.
      std::vector<std::size_t> free;
      for (std::size_t s = 0; s < n; ++s)
        if (!chosen[s]) free.push_back(s);
      pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
    }
    take(pick);
  }
  return centroids;
}

KmeansResult to_result(Fit fit) {
  KmeansResult r;
  r.cohort.centroids = std::move(fit.centroids);
  r.assignment.labels = std::move(fit.labels);
  r.assignment.cost = fit.cost;
  r.cost_trace = std::move(fit.trace);
  return r;
}

Fit best_of_restarts(std::span<const DiagGmm> models, const KmeansOptions& options) {
  std::mt19937_64 rng(options.seed);
  Fit best;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    Fit fit = lloyd(models, kmeanspp(models, options.k, rng), options.iterations);
    if (!have || fit.cost < best.cost) {
      best = std::move(fit);
      have = true;
    }
  }
  return best;
}

}  // namespace

double weighted_kl(const DiagGmm& a, const DiagGmm& b, KlForm form) {
  require_compatible(a, b);
  const std::size_t d = a.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < a.components(); ++i) {
    const auto ma = a.mean(i), mb = b.mean(i);
    const auto ia = a.inv_variance(i), ib = b.inv_variance(i);
    double quad = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = ma[j] - mb[j];
      const double precision = form == KlForm::kSymmetric ? ia[j] + ib[j] : ia[j] - ib[j];
      quad += diff * diff * precision;
    }
    total += 0.5 * (a.weights()[i] + b.weights()[i]) * 0.5 * quad;
  }
  return total;
}

double clustering_cost(std::span<const DiagGmm> models, const Cohort& cohort,
                       std::span<const std::size_t> labels) {
  if (labels.size() != models.size())
    throw InvalidInput("clustering_cost: one label per model required");
  for (std::size_t l : labels)
    if (l >= cohort.size()) throw InvalidInput("clustering_cost: label out of range");
  return cost_of(models, cohort.centroids, labels);
}

KmeansResult kmeans_gmm(std::span<const DiagGmm> models, const KmeansOptions& options) {
  require_models(models, options.k);
  return to_result(best_of_restarts(models, options));
}

std::vector<std::pair<std::size_t, double>> cost_curve(std::span<const DiagGmm> models,
                                                       std::size_t k_max,
                                                       const KmeansOptions& options) {
  require_models(models, k_max);
  std::vector<std::pair<std::size_t, double>> curve;
  Fit previous;
  for (std::size_t k = 1; k <= k_max; ++k) {
    KmeansOptions opt = options;
    opt.k = k;
    opt.seed = options.seed + k;
    Fit best = best_of_restarts(models, opt);
    if (k > 1) {
      std::size_t far = 0;
      double worst = -1.0;
      for (std::size_t s = 0; s < models.size(); ++s) {
        const double v = weighted_kl(models[s], previous.centroids[previous.labels[s]]);
        if (v > worst) {
          worst = v;
          far = s;
        }
      }
      std::vector<DiagGmm> init = previous.centroids;
      init.push_back(models[far]);
      Fit warm = lloyd(models, std::move(init), options.iterations);
      if (warm.cost < best.cost) best = std::move(warm);
    }
    curve.emplace_back(k, best.cost);
    previous = std::move(best);
  }
  return curve;
}

}  // namespace cohortsv
