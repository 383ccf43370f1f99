// src/decider.cpp

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

#include "cohortsv/decider.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "cohortsv/error.hpp"

namespace cohortsv {

namespace {

double sign_of(TrialLabel label) { return label == TrialLabel::kGenuine ? 1.0 : -1.0; }

void require_trainable(const LabeledSet& data, const char* who) {
  if (data.dim == 0) throw InvalidInput(std::string(who) + ": zero feature dimension");
  if (data.features.size() != data.rows() * data.dim)
    throw InvalidInput(std::string(who) + ": feature matrix does not match row count");
  if (data.rows() < 2) throw InvalidInput(std::string(who) + ": need at least 2 rows");
  const auto genuine = std::count(data.labels.begin(), data.labels.end(), TrialLabel::kGenuine);
  if (genuine == 0 || genuine == static_cast<std::ptrdiff_t>(data.rows()))
    throw InvalidInput(std::string(who) + ": training data contains a single class");
  for (double v : data.features)
    if (!std::isfinite(v)) throw InvalidInput(std::string(who) + ": non-finite feature");
}

void require_dim(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw InvalidInput("predict_score: model expects dim " + std::to_string(expected) +
                       ", got " + std::to_string(got));
}

LabeledSet standardized(const LabeledSet& data, const Standardizer& st) {
  LabeledSet z;
  z.dim = data.dim;
  z.features.reserve(data.features.size());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto r = st.apply(data.row(i));
    z.features.insert(z.features.end(), r.begin(), r.end());
  }
  z.labels = data.labels;
  return z;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Primal objective with the bias stored as the trailing entry of `w`.
double primal(std::span<const double> w, const LabeledSet& z, double lambda) {
  const std::size_t d = z.dim;
  double hinge = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double margin = sign_of(z.labels[i]) * (dot(w.first(d), z.row(i)) + w[d]);
    hinge += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * lambda * dot(w, w) + hinge / static_cast<double>(z.rows());
}

}  // namespace

void LabeledSet::add(std::span<const double> x, TrialLabel label) {
  if (dim == 0 && labels.empty()) dim = x.size();
  if (x.size() != dim) throw InvalidInput("LabeledSet::add: row dimension mismatch");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

Standardizer Standardizer::fit(const LabeledSet& data) {
  const std::size_t d = data.dim;
  const double n = static_cast<double>(data.rows());
  Standardizer st;
  st.mean.assign(d, 0.0);
  st.scale.assign(d, 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) st.mean[j] += data.row(i)[j];
  for (double& m : st.mean) m /= n;
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = data.row(i)[j] - st.mean[j];
      st.scale[j] += diff * diff;
    }
  for (double& s : st.scale) {
    s = std::sqrt(s / n);
    if (!(s > 1e-12)) s = 1.0;
  }
  return st;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / scale[j];
  return z;
}

SvmTrainResult train_svm(const LabeledSet& data, const SvmOptions& options) {
  require_trainable(data, "train_svm");
  if (!(options.regularization > 0.0)) throw InvalidInput("train_svm: regularization must be > 0");

  const Standardizer st = Standardizer::fit(data);
  const LabeledSet z = standardized(data, st);
  const std::size_t n = z.rows();
  const std::size_t d = z.dim;
  const double upper = 1.0 / (options.regularization * static_cast<double>(n));

  std::vector<double> w(d + 1, 0.0), alpha(n, 0.0), q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = dot(z.row(i), z.row(i)) + 1.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);

  SvmTrainResult result;
  std::vector<double> best_w = w;
  double best = primal(w, z, options.regularization);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const double y = sign_of(z.labels[i]);
      const auto x = z.row(i);
      const double g = y * (dot(std::span<const double>(w).first(d), x) + w[d]) - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == upper) pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double next = std::clamp(alpha[i] - g / q[i], 0.0, upper);
      const double step = (next - alpha[i]) * y;
      alpha[i] = next;
      for (std::size_t j = 0; j < d; ++j) w[j] += step * x[j];
      w[d] += step;
    }
    const double obj = primal(w, z, options.regularization);
    if (!std::isfinite(obj)) throw TrainingDiverged("train_svm: non-finite objective");
    if (obj < best) {
      best = obj;
      best_w = w;
    }
    result.objective_trace.push_back(best);
    if (pg_max - pg_min < options.tolerance) break;
  }

  result.model.weights.assign(best_w.begin(), best_w.begin() + static_cast<std::ptrdiff_t>(d));
  result.model.bias = best_w[d];
  result.model.options = options;
  result.model.standardizer = st;
  return result;
}

double svm_objective(const LinearSvmModel& model, const LabeledSet& data) {
  const LabeledSet z = standardized(data, model.standardizer);
  std::vector<double> w = model.weights;
  w.push_back(model.bias);
  return primal(w, z, model.options.regularization);
}

MlpModel MlpModel::initialize(std::size_t input_dim, std::uint64_t seed) {
  if (input_dim == 0) throw InvalidInput("MlpModel: zero input dimension");
  MlpModel m;
  m.input_dim = input_dim;
  m.hidden_dim = kHiddenPerInput * input_dim;
  std::mt19937_64 rng(seed);
  const double r1 = std::sqrt(6.0 / static_cast<double>(m.input_dim + m.hidden_dim));
  const double r2 = std::sqrt(6.0 / static_cast<double>(m.hidden_dim + 2));
  std::uniform_real_distribution<double> u1(-r1, r1), u2(-r2, r2);
  m.w1.resize(m.hidden_dim * m.input_dim);
  for (double& v : m.w1) v = u1(rng);
  m.b1.assign(m.hidden_dim, 0.0);
  m.w2.resize(2 * m.hidden_dim);
  for (double& v : m.w2) v = u2(rng);
  m.b2.assign(2, 0.0);
  m.standardizer.mean.assign(input_dim, 0.0);
  m.standardizer.scale.assign(input_dim, 1.0);
  return m;
}

std::size_t MlpModel::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size();
}

std::vector<double> MlpModel::parameters() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  for (const auto* v : {&w1, &b1, &w2, &b2}) p.insert(p.end(), v->begin(), v->end());
  return p;
}

void MlpModel::set_parameters(std::span<const double> p) {
  if (p.size() != parameter_count()) throw InvalidInput("MlpModel: parameter count mismatch");
  auto it = p.begin();
  for (auto* v : {&w1, &b1, &w2, &b2}) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(v->size()), v->begin());
    it += static_cast<std::ptrdiff_t>(v->size());
  }
}

std::array<double, 2> MlpModel::logits(std::span<const double> z) const {
  std::array<double, 2> out{b2[0], b2[1]};
  for (std::size_t h = 0; h < hidden_dim; ++h) {
    const double a = std::tanh(b1[h] + dot({w1.data() + h * input_dim, input_dim}, z));
    out[0] += w2[h] * a;
    out[1] += w2[hidden_dim + h] * a;
  }
  return out;
}

std::array<double, 2> MlpModel::probabilities(std::span<const double> x) const {
  require_dim(input_dim, x.size());
  const auto o = logits(standardizer.apply(x));
  const double top = std::max(o[0], o[1]);
  const double e0 = std::exp(o[0] - top), e1 = std::exp(o[1] - top);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double mlp_loss_and_gradient(const MlpModel& model, const LabeledSet& rows,
                             std::span<const std::size_t> batch, std::vector<double>& gradient) {
  const std::size_t d = model.input_dim;
  const std::size_t hd = model.hidden_dim;
  gradient.assign(model.parameter_count(), 0.0);
  double* gw1 = gradient.data();
  double* gb1 = gw1 + hd * d;
  double* gw2 = gb1 + hd;
  double* gb2 = gw2 + 2 * hd;

  std::vector<double> act(hd), delta(hd);
  double loss = 0.0;
  for (std::size_t i : batch) {
    const auto z = rows.row(i);
    std::array<double, 2> o{model.b2[0], model.b2[1]};
    for (std::size_t h = 0; h < hd; ++h) {
      act[h] = std::tanh(model.b1[h] + dot({model.w1.data() + h * d, d}, z));
      o[0] += model.w2[h] * act[h];
      o[1] += model.w2[hd + h] * act[h];
    }
    const double top = std::max(o[0], o[1]);
    const double lse = top + std::log(std::exp(o[0] - top) + std::exp(o[1] - top));
    const std::size_t target = rows.labels[i] == TrialLabel::kGenuine ? 1 : 0;
    loss += lse - o[target];

    std::array<double, 2> d_out{std::exp(o[0] - lse), std::exp(o[1] - lse)};
    d_out[target] -= 1.0;
    for (std::size_t c = 0; c < 2; ++c) {
      gb2[c] += d_out[c];
      for (std::size_t h = 0; h < hd; ++h) gw2[c * hd + h] += d_out[c] * act[h];
    }
    for (std::size_t h = 0; h < hd; ++h) {
      const double back = model.w2[h] * d_out[0] + model.w2[hd + h] * d_out[1];
      delta[h] = back * (1.0 - act[h] * act[h]);
      gb1[h] += delta[h];
      for (std::size_t j = 0; j < d; ++j) gw1[h * d + j] += delta[h] * z[j];
    }
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (double& g : gradient) g *= scale;
  return loss * scale;
}

MlpModel train_mlp(const LabeledSet& data, const MlpOptions& options) {
  require_trainable(data, "train_mlp");
  if (options.batch_size == 0) throw InvalidInput("train_mlp: batch size must be >= 1");
  if (!(options.learning_rate > 0.0)) throw InvalidInput("train_mlp: learning rate must be > 0");
  if (!(options.momentum >= 0.0 && options.momentum < 1.0))
    throw InvalidInput("train_mlp: momentum must be in [0, 1)");

  MlpModel model = MlpModel::initialize(data.dim, options.seed);
  model.options = options;
  model.standardizer = Standardizer::fit(data);
  const LabeledSet z = standardized(data, model.standardizer);

  std::vector<double> params = model.parameters();
  std::vector<double> velocity(params.size(), 0.0), grad;

  std::vector<std::size_t> order(z.rows());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t len = std::min(options.batch_size, order.size() - start);
      const double loss = mlp_loss_and_gradient(
          model, z, std::span<const std::size_t>(order).subspan(start, len), grad);
      if (!std::isfinite(loss))
        throw TrainingDiverged("train_mlp: non-finite loss at epoch " + std::to_string(epoch));
      for (std::size_t k = 0; k < params.size(); ++k) {
        velocity[k] = options.momentum * velocity[k] - options.learning_rate * grad[k];
        params[k] += velocity[k];
      }
      model.set_parameters(params);
    }
  }
  for (double p : params)
    if (!std::isfinite(p)) throw TrainingDiverged("train_mlp: non-finite parameter");
  return model;
}

double predict_score(const LinearSvmModel& model, std::span<const double> feature) {
  require_dim(model.weights.size(), feature.size());
  return dot(model.weights, model.standardizer.apply(feature)) + model.bias;
}

double predict_score(const MlpModel& model, std::span<const double> feature) {
  require_dim(model.input_dim, feature.size());
  const auto o = model.logits(model.standardizer.apply(feature));
  return o[1] - o[0];
}

double predict_score(const DecisionModel& model, std::span<const double> feature) {
  return std::visit([&](const auto& m) { return predict_score(m, feature); }, model);
}

double accuracy(const DecisionModel& model, const LabeledSet& data) {
  if (data.rows() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const bool accept = predict_score(model, data.row(i)) >= 0.0;
    if (accept == (data.labels[i] == TrialLabel::kGenuine)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

}  // namespace cohortsv
