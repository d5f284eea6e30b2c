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

#ifndef MICL_ABLATION_H_
#define MICL_ABLATION_H_

#include <span>

#include "micl/curriculum.h"
#include "micl/evaluation.h"

namespace micl {

// Four re-training strategies compared from one shared round 0:
//   msc   re-trained once on the image-label detector's top boxes
//   ssg   re-trained once on the segmentation boxes
//   mil   re-localization loop with a random, linearly growing subset
//   micl  re-localization loop with consistency selection
struct AblationReport {
  // Label quality at round 0 (CorLoc of the boxes themselves).
  double msc_label_corloc = 0.0;
  double ssg_label_corloc = 0.0;
  double subset_label_corloc = 0.0;  // fused boxes of the round-0 easy set
  int subset_size = 0;
  int num_examples = 0;

  // CorLoc of each strategy's final detector on the training set.
  double msc_final = 0.0;
  double ssg_final = 0.0;
  double mil_final = 0.0;
  double micl_final = 0.0;

  ErrorHistogram msc_errors;  // round-0 detector boxes
  ErrorHistogram ssg_errors;  // round-0 segmentation boxes

  MiclResult micl;
};

AblationReport RunAblation(std::span<const PreparedImage> images, int num_categories,
                           const MiclConfig& config);

}  // namespace micl

#endif  // MICL_ABLATION_H_
