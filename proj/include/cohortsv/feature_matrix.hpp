// include/cohortsv/feature_matrix.hpp

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

#ifndef COHORTSV_FEATURE_MATRIX_HPP
#define COHORTSV_FEATURE_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace cohortsv {

/// Frames x dim acoustic features, row-major, single precision as stored on
/// disk. Arithmetic on features is done in double.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  /// Throws InvalidInput unless frames >= 1, dim >= 1, values.size() ==
  /// frames * dim and every value is finite.
  FeatureMatrix(std::size_t frames, std::size_t dim, std::vector<float> values);

  std::size_t frames() const { return frames_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return frames_ == 0; }

  std::span<const float> row(std::size_t t) const {
    return {values_.data() + t * dim_, dim_};
  }
  std::span<const float> values() const { return values_; }

  /// Rows of `other` appended below these rows; dims must agree.
  FeatureMatrix concat(const FeatureMatrix& other) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

}  // namespace cohortsv

#endif  // COHORTSV_FEATURE_MATRIX_HPP
