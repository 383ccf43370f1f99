// include/cohortsv/trial.hpp

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

#ifndef COHORTSV_TRIAL_HPP
#define COHORTSV_TRIAL_HPP

#include <string>
#include <string_view>

namespace cohortsv {

enum class TrialLabel { kGenuine, kImposter };

/// One (test utterance, claimed speaker) pair.
struct TrialRecord {
  std::string utterance_id;
  std::string claimed_speaker;
  TrialLabel label = TrialLabel::kImposter;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline std::string_view to_string(TrialLabel label) {
  return label == TrialLabel::kGenuine ? "genuine" : "imposter";
}

}  // namespace cohortsv

#endif  // COHORTSV_TRIAL_HPP
