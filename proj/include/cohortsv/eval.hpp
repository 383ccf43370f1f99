// include/cohortsv/eval.hpp

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

#ifndef COHORTSV_EVAL_HPP
#define COHORTSV_EVAL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cohortsv/trial.hpp"

namespace cohortsv {

/// One operating point: accept when score >= threshold.
struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;  // imposters accepted
  double frr = 0.0;  // genuine rejected
};

struct EvalReport {
  double eer = 0.0;
  double eer_threshold = 0.0;
  std::vector<DetPoint> det_points;  // ascending threshold
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
};

/// One point per distinct score (ascending), followed by a reject-all point
/// at +inf. FAR is non-increasing and FRR non-decreasing along the list.
std::vector<DetPoint> det_curve(std::span<const double> scores,
                                std::span<const TrialLabel> labels);

/// EER where FAR - FRR changes sign, linearly interpolated between the two
/// bracketing operating points.
EvalReport compute_eer(std::span<const double> scores, std::span<const TrialLabel> labels);

/// Crossing of a DET point list; exposed so reference sweeps can share it.
void eer_from_points(std::span<const DetPoint> points, double& eer, double& threshold);

/// Counts of 1-based rank positions in [1, max_rank].
std::vector<std::size_t> rank_histogram(std::span<const std::size_t> positions,
                                        std::size_t max_rank);

}  // namespace cohortsv

#endif  // COHORTSV_EVAL_HPP
