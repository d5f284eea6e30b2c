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

#ifndef MICL_SEGMENTER_H_
#define MICL_SEGMENTER_H_

#include "micl/feature_grid.h"
#include "micl/geometry.h"
#include "micl/seeding.h"

namespace micl {

// Expands seeds into a full-image mask. Implementations must keep every seed
// pixel's label and return a mask with the input's dimensions.
class SegmenterBackend {
 public:
  virtual ~SegmenterBackend() = default;
  virtual LabeledMask Segment(const FeatureGrid& features,
                              const SeedMask& seeds) const = 0;
};

struct RegionGrowConfig {
  double similarity_tolerance = 0.5;  // L2 distance in feature units
  int max_iterations = 256;
};

// Iterative seeded region growing. Each iteration first computes the mean
// feature of every category's currently labeled pixels, then every
// unlabeled pixel adjacent (4-neighborhood) to a category pixel adopts that
// category when its feature lies within the tolerance of the category mean;
// among several candidates the nearest mean wins, lower id on ties. Adoption
// reads the labels from the start of the iteration. Background seeds are
// never overwritten and never propagate. Leftover pixels become kBackground.
LabeledMask GrowSeeds(const FeatureGrid& features, const SeedMask& seeds,
                      const RegionGrowConfig& config = {});

class RegionGrowSegmenter : public SegmenterBackend {
 public:
  explicit RegionGrowSegmenter(RegionGrowConfig config = {}) : config_(config) {}
  LabeledMask Segment(const FeatureGrid& features,
                      const SeedMask& seeds) const override {
    return GrowSeeds(features, seeds, config_);
  }
  const RegionGrowConfig& config() const { return config_; }

 private:
  RegionGrowConfig config_;
};

// Box of the largest connected `category` component of a segmenter mask.
inline MaybeBox SsgBox(const LabeledMask& mask, int category) {
  return LargestComponentBox(mask, category);
}

}  // namespace micl

#endif  // MICL_SEGMENTER_H_
