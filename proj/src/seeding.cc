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

#include "micl/seeding.h"

#include <cmath>
#include <stdexcept>

namespace micl {

SeedMask::SeedMask(int width, int height)
    : labels(width, height, kUnlabeled),
      source(static_cast<size_t>(width) * height, SeedSource::kNone) {}

void SeedMask::Set(int x, int y, int label, SeedSource src) {
  labels.at(x, y) = label;
  source[static_cast<size_t>(y) * labels.width() + x] = src;
}

SeedMask ThresholdObjectSeeds(const std::map<int, Plane>& normalized,
                              const std::set<int>& existing, double t_obj) {
  if (normalized.empty()) throw std::invalid_argument("ThresholdObjectSeeds: no planes");
  if (!(t_obj > 0.0 && t_obj < 1.0)) {
    throw std::invalid_argument("ThresholdObjectSeeds: t_obj must be in (0,1)");
  }
  const Plane& first = normalized.begin()->second;
  SeedMask out(first.width(), first.height());
  std::vector<double> best(first.size(), -1.0);
  // std::map iterates in ascending id, and only a strictly larger value
  // replaces, so exact ties keep the lower id.
  for (const auto& [category, plane] : normalized) {
    if (!existing.contains(category)) continue;
    if (plane.height() != first.height() || plane.width() != first.width()) {
      throw DimensionError("ThresholdObjectSeeds: plane shapes differ");
    }
    for (int y = 0; y < plane.height(); ++y) {
      for (int x = 0; x < plane.width(); ++x) {
        const double v = plane.at(y, x);
        const size_t i = static_cast<size_t>(y) * plane.width() + x;
        if (v >= t_obj && v > best[i]) {
          best[i] = v;
          out.Set(x, y, category, SeedSource::kObject);
        }
      }
    }
  }
  return out;
}

BackgroundSeeds AdaptiveBackgroundSeeds(const Plane& background, double t_init,
                                        double min_fraction) {
  const double total = static_cast<double>(background.size());
  // Walk t_init, t_init - step, ... on a grid rounded to 1e-9 so that the
  // nominal values (0.5, 0.3, ...) are hit exactly.
  double threshold = t_init;
  for (int step = 0;; ++step) {
    threshold = std::round((t_init - step * kBackgroundThresholdStep) * 1e9) / 1e9;
    if (threshold <= 0.0) {
      threshold = 0.0;
      break;
    }
    size_t covered = 0;
    for (double v : background.values()) covered += (v >= threshold);
    if (covered / total >= min_fraction) break;
  }
  SeedMask seeds(background.width(), background.height());
  for (int y = 0; y < background.height(); ++y) {
    for (int x = 0; x < background.width(); ++x) {
      if (threshold == 0.0 || background.at(y, x) >= threshold) {
        seeds.Set(x, y, kBackground, SeedSource::kBackground);
      }
    }
  }
  return {std::move(seeds), threshold};
}

SeedMask PoolSeeds(const SeedMask& object_seeds, const SeedMask& background_seeds) {
  if (object_seeds.width() != background_seeds.width() ||
      object_seeds.height() != background_seeds.height()) {
    throw DimensionError("PoolSeeds: dimension mismatch");
  }
  SeedMask out = background_seeds;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (object_seeds.source_at(x, y) == SeedSource::kObject) {
        out.Set(x, y, object_seeds.labels.at(x, y), SeedSource::kObject);
      }
    }
  }
  return out;
}

}  // namespace micl
