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

#include "micl/segmenter.h"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace micl {

namespace {

struct RegionMean {
  std::vector<double> sum;
  int64_t count = 0;
};

}  // namespace

LabeledMask GrowSeeds(const FeatureGrid& features, const SeedMask& seeds,
                      const RegionGrowConfig& config) {
  const int w = seeds.width();
  const int h = seeds.height();
  if (features.width() != w || features.height() != h) {
    throw DimensionError("GrowSeeds: features and seeds differ in size");
  }
  if (!std::isfinite(config.similarity_tolerance) ||
      config.similarity_tolerance < 0.0) {
    throw std::invalid_argument("GrowSeeds: tolerance must be finite and >= 0");
  }
  const int k_count = features.channels();
  const double tol2 = config.similarity_tolerance * config.similarity_tolerance;

  LabeledMask current = seeds.labels;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    std::map<int, RegionMean> means;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int label = current.at(x, y);
        if (label < 0) continue;
        RegionMean& m = means[label];
        if (m.sum.empty()) m.sum.assign(k_count, 0.0);
        const auto cell = features.cell(y, x);
        for (int k = 0; k < k_count; ++k) m.sum[k] += cell[k];
        ++m.count;
      }
    }
    if (means.empty()) break;
    for (auto& [label, m] : means) {
      for (double& v : m.sum) v /= static_cast<double>(m.count);
    }

    LabeledMask next = current;
    bool changed = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (current.at(x, y) != kUnlabeled) continue;
        const int nx[4] = {x, x - 1, x + 1, x};
        const int ny[4] = {y - 1, y, y, y + 1};
        int best_label = kUnlabeled;
        double best_d2 = 0.0;
        const auto cell = features.cell(y, x);
        for (int n = 0; n < 4; ++n) {
          if (nx[n] < 0 || nx[n] >= w || ny[n] < 0 || ny[n] >= h) continue;
          const int label = current.at(nx[n], ny[n]);
          if (label < 0) continue;
          const auto& mean = means.at(label).sum;
          double d2 = 0.0;
          for (int k = 0; k < k_count; ++k) {
            const double d = cell[k] - mean[k];
            d2 += d * d;
          }
          if (d2 > tol2) continue;
          if (best_label == kUnlabeled || d2 < best_d2 ||
              (d2 == best_d2 && label < best_label)) {
            best_label = label;
            best_d2 = d2;
          }
        }
        if (best_label != kUnlabeled) {
          next.at(x, y) = best_label;
          changed = true;
        }
      }
    }
    current = std::move(next);
    if (!changed) break;
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (current.at(x, y) == kUnlabeled) current.at(x, y) = kBackground;
    }
  }
  return current;
}

}  // namespace micl
