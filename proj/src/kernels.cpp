// src/kernels.cpp

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

#include "cohortsv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cohortsv::kernels {

SuffStats::SuffStats(std::size_t m, std::size_t d, bool second_order)
    : components(m),
      dim(d),
      occupancy(m, 0.0),
      first(m * d, 0.0),
      second(second_order ? m * d : 0, 0.0) {}

void SuffStats::add(const SuffStats& o) {
  for (std::size_t i = 0; i < occupancy.size(); ++i) occupancy[i] += o.occupancy[i];
  for (std::size_t k = 0; k < first.size(); ++k) first[k] += o.first[k];
  for (std::size_t k = 0; k < second.size(); ++k) second[k] += o.second[k];
  loglik += o.loglik;
}

double frame_loglik(const DiagGmm& model, std::span<const float> frame,
                    std::span<double> scratch) {
  const std::size_t m = model.components();
  const std::size_t d = model.dim();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double* mu = model.mean(i).data();
    const double* iv = model.inv_variance(i).data();
    double quad = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = static_cast<double>(frame[j]) - mu[j];
      quad += diff * diff * iv[j];
    }
    scratch[i] = model.log_const(i) - 0.5 * quad;
    best = std::max(best, scratch[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += std::exp(scratch[i] - best);
  return best + std::log(sum);
}

namespace {

// Frames [begin, end) accumulated into `out`.
void accumulate_range(const DiagGmm& model, const FeatureMatrix& data, std::size_t begin,
                      std::size_t end, SuffStats& out, std::vector<double>& scratch) {
  const std::size_t m = model.components();
  const std::size_t d = model.dim();
  const bool second = !out.second.empty();
  for (std::size_t t = begin; t < end; ++t) {
    const auto x = data.row(t);
    const double ll = frame_loglik(model, x, scratch);
    out.loglik += ll;
    for (std::size_t i = 0; i < m; ++i) {
      const double post = std::exp(scratch[i] - ll);
      if (post == 0.0) continue;
      out.occupancy[i] += post;
      double* f = out.first.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) f[j] += post * x[j];
      if (second) {
        double* s = out.second.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) s[j] += post * x[j] * static_cast<double>(x[j]);
      }
    }
  }
}

std::size_t block_count(std::size_t frames) {
  return (frames + kBlockFrames - 1) / kBlockFrames;
}

}  // namespace

namespace serial {

double total_loglik(const DiagGmm& model, const FeatureMatrix& data) {
  std::vector<double> scratch(model.components());
  double total = 0.0;
  for (std::size_t t = 0; t < data.frames(); ++t)
    total += frame_loglik(model, data.row(t), scratch);
  return total;
}

SuffStats accumulate(const DiagGmm& model, const FeatureMatrix& data, bool second_order) {
  SuffStats stats(model.components(), model.dim(), second_order);
  std::vector<double> scratch(model.components());
  accumulate_range(model, data, 0, data.frames(), stats, scratch);
  return stats;
}

}  // namespace serial

namespace omp {

double total_loglik(const DiagGmm& model, const FeatureMatrix& data) {
  const std::size_t frames = data.frames();
  const std::size_t blocks = block_count(frames);
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel
  {
    std::vector<double> scratch(model.components());
#pragma omp for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t end = std::min(frames, (b + 1) * kBlockFrames);
      double sum = 0.0;
      for (std::size_t t = b * kBlockFrames; t < end; ++t)
        sum += frame_loglik(model, data.row(t), scratch);
      partial[b] = sum;
    }
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

SuffStats accumulate(const DiagGmm& model, const FeatureMatrix& data, bool second_order) {
  const std::size_t frames = data.frames();
  const std::size_t blocks = block_count(frames);
  std::vector<SuffStats> partial(blocks);
#pragma omp parallel
  {
    std::vector<double> scratch(model.components());
#pragma omp for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b) {
      partial[b] = SuffStats(model.components(), model.dim(), second_order);
      accumulate_range(model, data, b * kBlockFrames, std::min(frames, (b + 1) * kBlockFrames),
                       partial[b], scratch);
    }
  }
  SuffStats stats(model.components(), model.dim(), second_order);
  for (const auto& p : partial) stats.add(p);
  return stats;
}

}  // namespace omp

}  // namespace cohortsv::kernels
