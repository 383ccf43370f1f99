// src/synth.cpp

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

#include "cohortsv/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "cohortsv/error.hpp"

namespace cohortsv {

namespace {

// Per-speaker generating mixture: base means shifted in units of the base
// standard deviations.
DiagGmm perturb(const DiagGmm& base, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> means = base.means();
  for (std::size_t k = 0; k < means.size(); ++k)
    means[k] += scale * std::sqrt(base.variances()[k]) * normal(rng);
  return base.with_means(std::move(means));
}

// Frames from `gmm`, all shifted by one session offset.
FeatureMatrix sample(const DiagGmm& gmm, std::size_t frames, double session_scale,
                     std::mt19937_64& rng) {
  const std::size_t d = gmm.dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::discrete_distribution<std::size_t> pick(gmm.weights().begin(), gmm.weights().end());

  // Session offsets scale with the average component spread per dimension.
  std::vector<double> offset(d);
  for (std::size_t j = 0; j < d; ++j) {
    double spread = 0.0;
    for (std::size_t i = 0; i < gmm.components(); ++i)
      spread += gmm.weights()[i] * std::sqrt(gmm.variance(i)[j]);
    offset[j] = session_scale * spread * normal(rng);
  }

  std::vector<float> values(frames * d);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t i = pick(rng);
    const auto mu = gmm.mean(i);
    const auto var = gmm.variance(i);
    for (std::size_t j = 0; j < d; ++j)
      values[t * d + j] =
          static_cast<float>(mu[j] + std::sqrt(var[j]) * normal(rng) + offset[j]);
  }
  return FeatureMatrix(frames, d, std::move(values));
}

}  // namespace

void SynthConfig::validate() const {
  if (n_speakers < 1 || dim < 1 || ubm_components < 1 || ubm_speakers < 1 ||
      ubm_frames_per_speaker < 1 || frames_per_enroll < 1 || frames_per_test < 1 ||
      tests_per_speaker < 1)
    throw InvalidInput("SynthConfig: every count must be >= 1");
  if (!(speaker_shift_scale > 0.0) || !std::isfinite(speaker_shift_scale))
    throw InvalidInput("SynthConfig: speaker_shift_scale must be > 0");
  if (!(session_shift_scale >= 0.0) || !std::isfinite(session_shift_scale))
    throw InvalidInput("SynthConfig: session_shift_scale must be >= 0");
}

std::string speaker_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "spk%03zu", index);
  return buf;
}

Corpus generate_corpus(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const std::size_t m = config.ubm_components;
  const std::size_t d = config.dim;

  std::uniform_real_distribution<double> weight_draw(0.5, 1.5), var_draw(0.5, 2.0);
  std::normal_distribution<double> mean_draw(0.0, 2.0);
  std::vector<double> w(m), mu(m * d), var(m * d);
  double total = 0.0;
  for (double& v : w) total += (v = weight_draw(rng));
  for (double& v : w) v /= total;
  for (double& v : mu) v = mean_draw(rng);
  for (double& v : var) v = var_draw(rng);

  Corpus corpus;
  corpus.base = DiagGmm(std::move(w), std::move(mu), std::move(var));

  for (std::size_t s = 0; s < config.ubm_speakers; ++s) {
    const DiagGmm spk = perturb(corpus.base, config.speaker_shift_scale, rng);
    corpus.ubm_train = corpus.ubm_train.concat(
        sample(spk, config.ubm_frames_per_speaker, config.session_shift_scale, rng));
  }

  for (std::size_t s = 0; s < config.n_speakers; ++s) {
    const std::string id = speaker_id(s);
    const DiagGmm spk = perturb(corpus.base, config.speaker_shift_scale, rng);
    corpus.speakers.push_back(id);
    corpus.enrollments.push_back(
        sample(spk, config.frames_per_enroll, config.session_shift_scale, rng));
    for (std::size_t u = 0; u < config.tests_per_speaker; ++u)
      corpus.tests.push_back({id + "_u" + std::to_string(u), id,
                              sample(spk, config.frames_per_test, config.session_shift_scale, rng)});
  }

  for (const auto& t : corpus.tests) {
    corpus.trials.push_back({t.id, t.speaker, TrialLabel::kGenuine});
    for (const auto& s : corpus.speakers)
      if (s != t.speaker) corpus.trials.push_back({t.id, s, TrialLabel::kImposter});
  }
  return corpus;
}

}  // namespace cohortsv
