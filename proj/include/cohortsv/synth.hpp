// include/cohortsv/synth.hpp

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

#ifndef COHORTSV_SYNTH_HPP
#define COHORTSV_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cohortsv/feature_matrix.hpp"
#include "cohortsv/gmm.hpp"
#include "cohortsv/trial.hpp"

namespace cohortsv {

struct SynthConfig {
  std::size_t n_speakers = 60;
  std::size_t dim = 8;
  std::size_t ubm_components = 32;
  /// Background speakers whose pooled frames train the UBM.
  std::size_t ubm_speakers = 60;
  std::size_t ubm_frames_per_speaker = 2000;
  std::size_t frames_per_enroll = 500;
  std::size_t frames_per_test = 200;
  std::size_t tests_per_speaker = 4;
  /// Speaker mean offsets, in per-dimension standard deviations.
  double speaker_shift_scale = 1.0;
  /// Per-recording constant offset (channel/session), same units.
  double session_shift_scale = 0.5;
  std::uint64_t seed = 42;

  /// Throws InvalidInput on zero counts or non-positive shift scale.
  void validate() const;
};

struct TestUtterance {
  std::string id;
  std::string speaker;
  FeatureMatrix features;
};

struct Corpus {
  DiagGmm base;  // ground-truth generator shared by all speakers
  FeatureMatrix ubm_train;
  std::vector<std::string> speakers;
  std::vector<FeatureMatrix> enrollments;  // parallel to speakers
  std::vector<TestUtterance> tests;
  /// Every test against every enrolled speaker, genuine first.
  std::vector<TrialRecord> trials;
};

/// Pure function of the config.
Corpus generate_corpus(const SynthConfig& config);

std::string speaker_id(std::size_t index);

}  // namespace cohortsv

#endif  // COHORTSV_SYNTH_HPP
