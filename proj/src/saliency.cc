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

#include "micl/saliency.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "micl/kernels.h"

namespace micl {

Plane CamMap(const FeatureGrid& features, const LinearHead& head, int category) {
  if (category < 0 || category >= static_cast<int>(head.weights.size())) {
    throw std::out_of_range("CamMap: unknown category " + std::to_string(category));
  }
  return kernels::parallel::ChannelWeightedSum(features, head.weights[category]);
}

Plane GradBackgroundMap(const std::map<int, FeatureGrid>& gradients) {
  if (gradients.empty()) {
    throw std::invalid_argument("GradBackgroundMap: no categories");
  }
  const FeatureGrid& first = gradients.begin()->second;
  Plane best(first.height(), first.width(), 0.0);
  for (const auto& [category, g] : gradients) {
    if (!g.SameShape(first)) {
      throw DimensionError("GradBackgroundMap: gradient grids differ in shape");
    }
    double z = 0.0;
    for (double v : g.values()) z = std::max(z, std::abs(v));
    if (z == 0.0) continue;  // degenerate category
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) {
        double m = 0.0;
        for (double v : g.cell(y, x)) m = std::max(m, std::abs(v));
        best.at(y, x) = std::max(best.at(y, x), m / z);
      }
    }
  }
  for (double& v : best.values()) v = 1.0 - v;
  return best;
}

Plane RoiSaliency(const FeatureGrid& roi_features, const FeatureGrid& roi_gradients) {
  return kernels::parallel::ProductChannelSum(roi_gradients, roi_features);
}

Plane BilinearResize(const Plane& src, int out_height, int out_width) {
  return kernels::parallel::BilinearResize(src, out_height, out_width);
}

Plane AggregateRoiSaliency(std::span<const ScoredRoiMap> rois, int height,
                           int width) {
  std::vector<kernels::PlacedPlane> placed;
  placed.reserve(rois.size());
  for (const auto& r : rois) {
    if (!(r.score >= 0.0 && r.score <= 1.0)) {
      throw std::invalid_argument("AggregateRoiSaliency: score outside [0,1]");
    }
    placed.push_back({r.box, &r.map, r.score});
  }
  return kernels::parallel::Aggregate(placed, height, width);
}

Plane NormalizePlane(const Plane& raw) {
  Plane out = raw;
  for (double& v : out.values()) v = std::max(v, 0.0);
  const auto [lo_it, hi_it] = std::minmax_element(out.values().begin(),
                                                  out.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi == lo) {
    const double fill = hi > 0.0 ? 1.0 : 0.0;
    for (double& v : out.values()) v = fill;
    return out;
  }
  const double range = hi - lo;
  for (double& v : out.values()) v = (v - lo) / range;
  return out;
}

}  // namespace micl
