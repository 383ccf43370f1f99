// tests/test_decider.cpp

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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cohortsv/decider.hpp"
#include "cohortsv/error.hpp"

using namespace cohortsv;

namespace {

LabeledSet two_blobs(std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.3);
  LabeledSet s;
  for (std::size_t i = 0; i < per_class; ++i) {
    s.add(std::vector<double>{2.0 + n(rng), 2.0 + n(rng)}, TrialLabel::kGenuine);
    s.add(std::vector<double>{-2.0 + n(rng), -2.0 + n(rng)}, TrialLabel::kImposter);
  }
  return s;
}

LabeledSet xor_set() {
  LabeledSet s;
  s.add(std::vector<double>{0, 0}, TrialLabel::kImposter);
  s.add(std::vector<double>{1, 1}, TrialLabel::kImposter);
  s.add(std::vector<double>{0, 1}, TrialLabel::kGenuine);
  s.add(std::vector<double>{1, 0}, TrialLabel::kGenuine);
  return s;
}

LabeledSet noisy_set(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  LabeledSet s;
  for (std::size_t i = 0; i < rows; ++i) {
    const bool genuine = i % 2 == 0;
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = n(rng) + (genuine ? 0.7 : -0.7) * (j == 0);
    s.add(x, genuine ? TrialLabel::kGenuine : TrialLabel::kImposter);
  }
  return s;
}

}  // namespace

TEST_CASE("linear SVM separates two blobs and cannot fit XOR") {
  const auto blobs = two_blobs(40, 1);
  const DecisionModel svm = train_svm(blobs, {}).model;
  CHECK(accuracy(svm, blobs) == 1.0);
  CHECK(accuracy(DecisionModel{train_svm(xor_set(), {}).model}, xor_set()) <= 0.75);
}

TEST_CASE("SVM objective trace never increases and matches the returned model") {
  const auto data = noisy_set(120, 3, 2);
  const auto r = train_svm(data, {1e-2, 100, 5, 1e-12});
  REQUIRE(!r.objective_trace.empty());
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-6);
  CHECK(svm_objective(r.model, data) == doctest::Approx(r.objective_trace.back()).epsilon(1e-12));
}

TEST_CASE("SVM boundary is unchanged by duplicating every row") {
  const auto data = noisy_set(60, 3, 3);
  LabeledSet doubled;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    doubled.add(data.row(i), data.labels[i]);
    doubled.add(data.row(i), data.labels[i]);
  }
  const SvmOptions opt{1e-2, 20000, 7, 1e-12};
  const auto a = train_svm(data, opt).model;
  const auto b = train_svm(doubled, opt).model;
  for (std::size_t i = 0; i < data.rows(); ++i)
    CHECK(std::abs(predict_score(a, data.row(i)) - predict_score(b, data.row(i))) < 1e-6);
}

TEST_CASE("SVM solution does not depend on row order") {
  const auto data = noisy_set(50, 2, 4);
  std::vector<std::size_t> perm(data.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  LabeledSet reversed;
  for (std::size_t i : perm) reversed.add(data.row(i), data.labels[i]);
  const SvmOptions opt{1e-2, 20000, 7, 1e-12};
  const auto a = train_svm(data, opt).model;
  const auto b = train_svm(reversed, opt).model;
  for (std::size_t i = 0; i < data.rows(); ++i)
    CHECK(std::abs(predict_score(a, data.row(i)) - predict_score(b, data.row(i))) < 1e-6);
}

TEST_CASE("zero SVM scores zero; predictions are deterministic") {
  LinearSvmModel zero;
  zero.weights = {0.0, 0.0};
  zero.standardizer = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK(predict_score(zero, std::vector<double>{3.0, -7.0}) == 0.0);
  CHECK_THROWS_AS(predict_score(zero, std::vector<double>{1.0}), InvalidInput);

  const auto data = noisy_set(40, 2, 5);
  const auto a = train_svm(data, {}).model;
  const auto b = train_svm(data, {}).model;
  CHECK(a.weights == b.weights);
  CHECK(predict_score(a, data.row(0)) == predict_score(a, data.row(0)));
}

TEST_CASE("training rejects single-class data") {
  LabeledSet one;
  one.add(std::vector<double>{1.0}, TrialLabel::kGenuine);
  one.add(std::vector<double>{2.0}, TrialLabel::kGenuine);
  CHECK_THROWS_AS(train_svm(one, {}), InvalidInput);
  CHECK_THROWS_AS(train_mlp(one, {}), InvalidInput);
}

TEST_CASE("MLP fits XOR within 5000 epochs") {
  const MlpModel m = train_mlp(xor_set(), {5000, 0.01, 32, 1});
  CHECK(m.hidden_dim == 20);
  CHECK(accuracy(DecisionModel{m}, xor_set()) == 1.0);
}

TEST_CASE("MLP analytic gradient matches central differences") {
  const auto data = noisy_set(12, 5, 7);
  const MlpModel base = MlpModel::initialize(5, 7);
  REQUIRE(base.hidden_dim == 50);
  std::vector<std::size_t> all(data.rows());
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> grad, scratch;
  mlp_loss_and_gradient(base, data, all, grad);

  const auto p = base.parameters();
  MlpModel probe = base;
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto q = p;
    q[k] = p[k] + h;
    probe.set_parameters(q);
    const double up = mlp_loss_and_gradient(probe, data, all, scratch);
    q[k] = p[k] - h;
    probe.set_parameters(q);
    const double down = mlp_loss_and_gradient(probe, data, all, scratch);
    const double numeric = (up - down) / (2.0 * h);
    const double rel = std::abs(numeric - grad[k]) / std::max(1e-8, std::abs(numeric) + std::abs(grad[k]));
    worst = std::max(worst, rel);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("MLP softmax normalization and log-odds monotonicity") {
  const auto data = noisy_set(80, 3, 8);
  const MlpModel m = train_mlp(data, {50, 0.01, 16, 2});
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto p = m.probabilities(data.row(i));
    CHECK(std::abs(p[0] + p[1] - 1.0) < 1e-9);
    const double s = predict_score(m, data.row(i));
    CHECK(s == doctest::Approx(std::log(p[1] / p[0])).epsilon(1e-9));
    pairs.emplace_back(p[1], s);
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i].second >= pairs[i - 1].second);

  const MlpModel again = train_mlp(data, {50, 0.01, 16, 2});
  CHECK(again.parameters() == m.parameters());
  CHECK_THROWS_AS(predict_score(m, std::vector<double>{1.0}), InvalidInput);
}

TEST_CASE("MLP divergence is reported") {
  CHECK_THROWS_AS(train_mlp(noisy_set(40, 2, 9), {200, 1e308, 8, 0}), TrainingDiverged);
}

TEST_CASE("MLP option validation") {
  MlpOptions o;
  o.momentum = 1.0;
  CHECK_THROWS_AS(train_mlp(xor_set(), o), InvalidInput);
  o = {};
  o.learning_rate = 0.0;
  CHECK_THROWS_AS(train_mlp(xor_set(), o), InvalidInput);
}
