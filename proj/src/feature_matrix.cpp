// src/feature_matrix.cpp

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

#include "cohortsv/feature_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "cohortsv/error.hpp"

namespace cohortsv {

FeatureMatrix::FeatureMatrix(std::size_t frames, std::size_t dim, std::vector<float> values)
    : frames_(frames), dim_(dim), values_(std::move(values)) {
  if (frames_ == 0 || dim_ == 0)
    throw InvalidInput("FeatureMatrix: frames and dim must be >= 1");
  if (values_.size() != frames_ * dim_)
    throw InvalidInput("FeatureMatrix: expected " + std::to_string(frames_ * dim_) +
                       " values, got " + std::to_string(values_.size()));
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]))
      throw InvalidInput("FeatureMatrix: non-finite value at frame " +
                         std::to_string(k / dim_) + ", dim " + std::to_string(k % dim_));
  }
}

FeatureMatrix FeatureMatrix::concat(const FeatureMatrix& other) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  if (other.dim_ != dim_) throw InvalidInput("FeatureMatrix::concat: dim mismatch");
  std::vector<float> v = values_;
  v.insert(v.end(), other.values_.begin(), other.values_.end());
  return FeatureMatrix(frames_ + other.frames_, dim_, std::move(v));
}

}  // namespace cohortsv
