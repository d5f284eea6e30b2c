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

#include "micl/feature_grid.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace micl {

FeatureGrid::FeatureGrid(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw DimensionError("FeatureGrid: dimensions must be >= 1, got " +
                         std::to_string(height) + "x" + std::to_string(width) +
                         "x" + std::to_string(channels));
  }
  values_.assign(static_cast<size_t>(height) * width * channels, fill);
}

FeatureGrid::FeatureGrid(int height, int width, int channels,
                         std::vector<double> values)
    : FeatureGrid(height, width, channels) {
  if (values.size() != values_.size()) {
    throw DimensionError("FeatureGrid: expected " +
                         std::to_string(values_.size()) + " values, got " +
                         std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("FeatureGrid: non-finite value");
  }
  values_ = std::move(values);
}

Plane::Plane(int height, int width, double fill)
    : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw DimensionError("Plane: dimensions must be >= 1");
  }
  values_.assign(static_cast<size_t>(height) * width, fill);
}

double Plane::Max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

}  // namespace micl
