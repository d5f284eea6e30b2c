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

#ifndef MICL_SEEDING_H_
#define MICL_SEEDING_H_

#include <map>
#include <set>
#include <vector>

#include "micl/feature_grid.h"
#include "micl/geometry.h"

namespace micl {

inline constexpr double kDefaultObjectThreshold = 0.2;
inline constexpr double kDefaultBackgroundThreshold = 0.9;
inline constexpr double kDefaultMinBackgroundFraction = 0.10;
inline constexpr double kBackgroundThresholdStep = 0.05;

enum class SeedSource : unsigned char { kNone, kObject, kBackground };

// Labeled seeds plus the plane each seed came from. Unseeded pixels are
// kUnlabeled with source kNone.
struct SeedMask {
  LabeledMask labels;
  std::vector<SeedSource> source;  // row-major, one per pixel

  SeedMask() = default;
  SeedMask(int width, int height);

  int width() const { return labels.width(); }
  int height() const { return labels.height(); }
  SeedSource source_at(int x, int y) const {
    return source[static_cast<size_t>(y) * labels.width() + x];
  }
  void Set(int x, int y, int label, SeedSource src);

  bool operator==(const SeedMask&) const = default;
};

// A pixel is seeded with c when A(c) >= t_obj for an existing c; the most
// salient category wins, lower id on exact ties.
SeedMask ThresholdObjectSeeds(const std::map<int, Plane>& normalized,
                              const std::set<int>& existing,
                              double t_obj = kDefaultObjectThreshold);

struct BackgroundSeeds {
  SeedMask seeds;
  double threshold;  // the threshold finally applied
};

// Background seeds at bg >= t, starting at t_init and stepping t down by
// 0.05 until the seeded fraction reaches min_fraction (t = 0 seeds all).
BackgroundSeeds AdaptiveBackgroundSeeds(
    const Plane& background, double t_init = kDefaultBackgroundThreshold,
    double min_fraction = kDefaultMinBackgroundFraction);

// Union; object seeds win over background seeds on conflict.
SeedMask PoolSeeds(const SeedMask& object_seeds, const SeedMask& background_seeds);

}  // namespace micl

#endif  // MICL_SEEDING_H_
