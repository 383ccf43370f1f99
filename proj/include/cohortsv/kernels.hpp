// include/cohortsv/kernels.hpp

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

#ifndef COHORTSV_KERNELS_HPP
#define COHORTSV_KERNELS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cohortsv/feature_matrix.hpp"
#include "cohortsv/gmm.hpp"

// Frame-level GMM kernels. `serial` is the straightforward reference used by
// the tests; `omp` splits frames into fixed blocks of kBlockFrames, runs the
// blocks in parallel and reduces the per-block partials in block order, so
// the result does not depend on the thread count.
namespace cohortsv::kernels {

inline constexpr std::size_t kBlockFrames = 512;

/// Zeroth, first and (optionally) second order posterior statistics.
struct SuffStats {
  SuffStats() = default;
  SuffStats(std::size_t components, std::size_t dim, bool second_order);

  std::size_t components = 0;
  std::size_t dim = 0;
  std::vector<double> occupancy;  // M
  std::vector<double> first;      // M x dim
  std::vector<double> second;     // M x dim, empty without second order
  double loglik = 0.0;            // total over frames

  void add(const SuffStats& other);
};

/// log sum_i w_i N(x; mu_i, Sigma_i) for one frame. `scratch` must hold M values
/// and receives the per-component log joint densities.
double frame_loglik(const DiagGmm& model, std::span<const float> frame,
                    std::span<double> scratch);

namespace serial {
double total_loglik(const DiagGmm& model, const FeatureMatrix& data);
SuffStats accumulate(const DiagGmm& model, const FeatureMatrix& data, bool second_order);
}  // namespace serial

namespace omp {
double total_loglik(const DiagGmm& model, const FeatureMatrix& data);
SuffStats accumulate(const DiagGmm& model, const FeatureMatrix& data, bool second_order);
}  // namespace omp

}  // namespace cohortsv::kernels

#endif  // COHORTSV_KERNELS_HPP
