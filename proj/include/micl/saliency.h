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

#ifndef MICL_SALIENCY_H_
#define MICL_SALIENCY_H_

#include <map>
#include <span>
#include <vector>

#include "micl/feature_grid.h"
#include "micl/geometry.h"

namespace micl {

// Final linear layer of a GAP classifier: one weight per channel per category.
struct LinearHead {
  std::vector<std::vector<double>> weights;  // [category][channel]
  std::vector<double> bias;                  // [category], may be empty
};

// Per-category planes plus the background plane. `normalized` means every
// plane lies in [0, 1] and peaks at 1 unless it is identically zero.
struct SaliencyMap {
  std::map<int, Plane> objects;
  Plane background;
  bool normalized = false;
};

// Class activation map: sum_k f(y, x, k) * w(k; c). Raw, not normalized.
Plane CamMap(const FeatureGrid& features, const LinearHead& head, int category);

// Background saliency from per-category input gradients of p(c):
//   1 - max_c [ max_k |g_c(y, x, k)| / Z(c) ],  Z(c) = max_{y,x,k} |g_c|.
// A category whose gradients are all zero contributes 0 to the max, so if
// every category is degenerate the background is identically 1.
Plane GradBackgroundMap(const std::map<int, FeatureGrid>& gradients);

// Saliency inside one RoI: sum_k g(y, x, k) * f(y, x, k).
Plane RoiSaliency(const FeatureGrid& roi_features, const FeatureGrid& roi_gradients);

// Bilinear resize with half-pixel (align-corners=false) sampling.
Plane BilinearResize(const Plane& src, int out_height, int out_width);

struct ScoredRoiMap {
  BoundingBox box;
  Plane map;
  double score;  // p(c; r)
};

// sum_r resize(A(c, r), box_r) * p(c; r), each resized map zero-padded to the
// image. Raw (pre-normalization); an empty list gives an all-zero plane.
Plane AggregateRoiSaliency(std::span<const ScoredRoiMap> rois, int height,
                           int width);

// Clamps negatives to zero, then min-max rescales to [0, 1]. A constant
// plane maps to all ones when positive and stays all zeros otherwise.
Plane NormalizePlane(const Plane& raw);

}  // namespace micl

#endif  // MICL_SALIENCY_H_
