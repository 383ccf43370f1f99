// src/eval.cpp

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

#include "cohortsv/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cohortsv/error.hpp"

namespace cohortsv {

namespace {

void require_both_classes(std::span<const double> scores, std::span<const TrialLabel> labels,
                          std::size_t& n_target, std::size_t& n_nontarget) {
  if (scores.size() != labels.size())
    throw InvalidInput("compute_eer: " + std::to_string(scores.size()) + " scores for " +
                       std::to_string(labels.size()) + " labels");
  n_target = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), TrialLabel::kGenuine));
  n_nontarget = labels.size() - n_target;
  if (n_target == 0 || n_nontarget == 0)
    throw InvalidInput("compute_eer: need at least one genuine and one imposter trial");
  for (double s : scores)
    if (std::isnan(s)) throw InvalidInput("compute_eer: NaN score");
}

}  // namespace

std::vector<DetPoint> det_curve(std::span<const double> scores,
                                std::span<const TrialLabel> labels) {
  std::size_t n_tar = 0, n_non = 0;
  require_both_classes(scores, labels, n_tar, n_non);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sweep upwards: at threshold s, everything strictly below s is rejected.
  std::vector<DetPoint> points;
  std::size_t tar_below = 0, non_below = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double theta = scores[order[k]];
    points.push_back({theta, static_cast<double>(n_non - non_below) / static_cast<double>(n_non),
                      static_cast<double>(tar_below) / static_cast<double>(n_tar)});
    for (; k < order.size() && scores[order[k]] == theta; ++k)
      (labels[order[k]] == TrialLabel::kGenuine ? tar_below : non_below) += 1;
  }
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return points;
}

void eer_from_points(std::span<const DetPoint> points, double& eer, double& threshold) {
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double diff = points[j].far - points[j].frr;
    if (diff > 0.0) continue;
    if (diff == 0.0 || j == 0) {
      eer = 0.5 * (points[j].far + points[j].frr);
      threshold = points[j].threshold;
      return;
    }
    const DetPoint& a = points[j - 1];
    const DetPoint& b = points[j];
    const double da = a.far - a.frr;
    const double t = da / (da - diff);
    eer = a.far + t * (b.far - a.far);
    threshold = std::isfinite(b.threshold) ? a.threshold + t * (b.threshold - a.threshold)
                                           : a.threshold;
    return;
  }
  throw InvalidInput("eer_from_points: FAR never drops to FRR");
}

EvalReport compute_eer(std::span<const double> scores, std::span<const TrialLabel> labels) {
  EvalReport report;
  require_both_classes(scores, labels, report.n_target, report.n_nontarget);
  report.det_points = det_curve(scores, labels);
  eer_from_points(report.det_points, report.eer, report.eer_threshold);
  return report;
}

std::vector<std::size_t> rank_histogram(std::span<const std::size_t> positions,
                                        std::size_t max_rank) {
  std::vector<std::size_t> bins(max_rank, 0);
  for (std::size_t p : positions) {
    if (p < 1 || p > max_rank)
      throw InvalidInput("rank_histogram: position " + std::to_string(p) + " outside [1, " +
                         std::to_string(max_rank) + "]");
    ++bins[p - 1];
  }
  return bins;
}

}  // namespace cohortsv
