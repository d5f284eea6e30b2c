// Copyright 2026 The MICL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MICL_EVALUATION_H_
#define MICL_EVALUATION_H_

#include <array>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "micl/geometry.h"

namespace micl {

inline constexpr double kMatchIou = 0.5;

struct GroundTruthObject {
  int image_id;
  int category;
  BoundingBox box;
};

// Most confident box for one (image, existing category); nullopt = no box.
struct Prediction {
  int image_id;
  int category;
  MaybeBox box;
};

struct ScoredBox {
  int image_id;
  int category;
  BoundingBox box;
  double score;
};

class EvaluationConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Percentage of predictions with IoU >= 0.5 against any same-category
// ground truth box of their image. Empty predictions count as misses. A
// prediction for a category with no ground truth in its image throws
// EvaluationConfigError. No predictions at all gives 0.
double Corloc(std::span<const Prediction> predictions,
              std::span<const GroundTruthObject> ground_truth);

enum class ApVariant { kVoc07, kArea };

// Average precision of `category` at IoU 0.5. Detections are ranked by
// descending score (ties: lower image id, then input order); each one takes
// the unmatched ground truth box of its image with the highest IoU >= 0.5.
// Returns NaN when the category has no ground truth.
double AveragePrecision(std::span<const ScoredBox> detections,
                        std::span<const GroundTruthObject> ground_truth,
                        int category, ApVariant variant = ApVariant::kVoc07);

// Mean over the non-NaN entries; NaN when none is defined.
double MeanAveragePrecision(std::span<const double> aps);

enum class ErrorType { kCorrect, kTooLarge, kTooSmall, kOther };
inline constexpr std::array<ErrorType, 4> kAllErrorTypes = {
    ErrorType::kCorrect, ErrorType::kTooLarge, ErrorType::kTooSmall,
    ErrorType::kOther};

std::string_view ErrorTypeName(ErrorType type);

inline constexpr double kContainmentFraction = 0.9;

// CORRECT at IoU >= 0.5 with any box. Otherwise, against the highest-IoU
// box g (first on ties): TOO_LARGE when the prediction covers >= 90% of g
// and is bigger, TOO_SMALL when g covers >= 90% of the prediction and the
// prediction is smaller, OTHER otherwise (including no boxes at all).
ErrorType ClassifyError(const BoundingBox& prediction,
                        std::span<const BoundingBox> same_category_gt);

struct ErrorHistogram {
  std::array<int, 4> counts{};  // indexed by ErrorType
  int Count(ErrorType t) const { return counts[static_cast<int>(t)]; }
  // Most frequent non-CORRECT type; ties resolved in enum order.
  ErrorType ModalError() const;
};

// Classifies every non-empty prediction against its image's ground truth.
ErrorHistogram BuildErrorHistogram(std::span<const Prediction> predictions,
                                   std::span<const GroundTruthObject> ground_truth);

}  // namespace micl

#endif  // MICL_EVALUATION_H_
