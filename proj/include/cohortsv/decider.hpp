// include/cohortsv/decider.hpp

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

#ifndef COHORTSV_DECIDER_HPP
#define COHORTSV_DECIDER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cohortsv/trial.hpp"

namespace cohortsv {

/// Rows x dim training matrix with one label per row.
struct LabeledSet {
  std::size_t dim = 0;
  std::vector<double> features;  // row-major
  std::vector<TrialLabel> labels;

  std::size_t rows() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }
  void add(std::span<const double> x, TrialLabel label);
};

/// Per-dimension z-scoring fitted on training rows. Constant dimensions get
/// scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const LabeledSet& data);
  std::vector<double> apply(std::span<const double> x) const;
};

struct SvmOptions {
  double regularization = 1e-2;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  /// Stop when the projected-gradient spread of the dual falls below this.
  double tolerance = 1e-9;
};

/// Linear SVM; the bias is trained as an extra regularized weight on a
/// constant input.
struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  SvmOptions options;
  Standardizer standardizer;
};

struct SvmTrainResult {
  LinearSvmModel model;
  /// Primal objective of the returned-so-far model after each epoch.
  std::vector<double> objective_trace;
};

/// Minimizes lambda/2 |w|^2 + mean hinge loss by dual coordinate descent with
/// a seeded per-epoch shuffle. The model with the lowest primal objective seen
/// at an epoch boundary is returned.
SvmTrainResult train_svm(const LabeledSet& data, const SvmOptions& options);

/// Primal objective on standardized rows.
double svm_objective(const LinearSvmModel& model, const LabeledSet& data);

struct MlpOptions {
  std::size_t epochs = 500;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  /// Heavy-ball momentum on the minibatch gradient; 0 is plain SGD.
  double momentum = 0.0;
};

/// input -> tanh hidden layer (10 x input units) -> 2-way softmax.
/// Output 0 is the imposter class, output 1 the genuine class.
struct MlpModel {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::vector<double> w1;  // hidden x input
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // 2 x hidden
  std::vector<double> b2;  // 2
  MlpOptions options;
  Standardizer standardizer;

  static constexpr std::size_t kHiddenPerInput = 10;

  /// Glorot-uniform weights, zero biases.
  static MlpModel initialize(std::size_t input_dim, std::uint64_t seed);

  std::size_t parameter_count() const;
  /// w1, b1, w2, b2 concatenated.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> p);

  /// Output logits for an already standardized input.
  std::array<double, 2> logits(std::span<const double> z) const;
  /// Softmax over logits of the standardized `x`.
  std::array<double, 2> probabilities(std::span<const double> x) const;
};

/// Mean cross-entropy over the given (already standardized) rows and its
/// gradient with respect to parameters(), laid out the same way.
double mlp_loss_and_gradient(const MlpModel& model, const LabeledSet& rows,
                             std::span<const std::size_t> batch, std::vector<double>& gradient);

/// Cross-entropy backprop with Adam over seeded mini-batches. Throws
/// TrainingDiverged when the loss becomes non-finite.
MlpModel train_mlp(const LabeledSet& data, const MlpOptions& options);

using DecisionModel = std::variant<LinearSvmModel, MlpModel>;

/// Higher means more genuine: the signed SVM margin or the MLP genuine-class
/// log-odds. The stored standardizer is applied here.
double predict_score(const LinearSvmModel& model, std::span<const double> feature);
double predict_score(const MlpModel& model, std::span<const double> feature);
double predict_score(const DecisionModel& model, std::span<const double> feature);

/// Fraction of rows whose score sign matches the label (score >= 0 accepts).
double accuracy(const DecisionModel& model, const LabeledSet& data);

}  // namespace cohortsv

#endif  // COHORTSV_DECIDER_HPP
