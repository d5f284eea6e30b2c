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

#include "micl/geometry.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace micl {

BoundingBox::BoundingBox(int x_min, int y_min, int x_max, int y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (x_min < 0 || y_min < 0 || x_min >= x_max || y_min >= y_max) {
    throw std::invalid_argument(
        "BoundingBox: invalid (" + std::to_string(x_min) + "," +
        std::to_string(y_min) + "," + std::to_string(x_max) + "," +
        std::to_string(y_max) + ")");
  }
}

std::ostream& operator<<(std::ostream& os, const BoundingBox& box) {
  return os << "(" << box.x_min() << "," << box.y_min() << "," << box.x_max()
            << "," << box.y_max() << ")";
}

int64_t IntersectionArea(const BoundingBox& a, const BoundingBox& b) {
  const int64_t w =
      std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const int64_t h =
      std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const int64_t inter = IntersectionArea(a, b);
  if (inter == 0) return 0.0;
  const int64_t uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

// round((d + o) / 2) with exact halves resolved toward d. Box coordinates
// are non-negative, so integer division floors.
int MeanTowardFirst(int d, int o) {
  const int sum = d + o;
  if (sum % 2 == 0) return sum / 2;
  const int floor_half = sum / 2;
  return (d <= floor_half) ? floor_half : floor_half + 1;
}

}  // namespace

BoundingBox FuseBoxes(const BoundingBox& detector, const BoundingBox& other) {
  return BoundingBox(MeanTowardFirst(detector.x_min(), other.x_min()),
                     MeanTowardFirst(detector.y_min(), other.y_min()),
                     MeanTowardFirst(detector.x_max(), other.x_max()),
                     MeanTowardFirst(detector.y_max(), other.y_max()));
}

LabeledMask::LabeledMask(int width, int height, int fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("LabeledMask: dimensions must be >= 1");
  }
  labels_.assign(static_cast<size_t>(width) * height, fill);
}

MaybeBox LargestComponentBox(const LabeledMask& mask, int category) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<char> visited(static_cast<size_t>(w) * h, 0);
  std::vector<int> stack;

  int64_t best_size = 0;
  std::tuple<int, int, int, int> best{0, 0, 0, 0};  // y_min, x_min, y_max, x_max

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t idx = static_cast<size_t>(y) * w + x;
      if (visited[idx] || mask.at(x, y) != category) continue;

      int64_t size = 0;
      int x0 = x, x1 = x, y0 = y, y1 = y;
      visited[idx] = 1;
      stack.assign(1, static_cast<int>(idx));
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cx = cur % w;
        const int cy = cur / w;
        ++size;
        x0 = std::min(x0, cx);
        x1 = std::max(x1, cx);
        y0 = std::min(y0, cy);
        y1 = std::max(y1, cy);
        const int nx[4] = {cx, cx - 1, cx + 1, cx};
        const int ny[4] = {cy - 1, cy, cy, cy + 1};
        for (int n = 0; n < 4; ++n) {
          if (nx[n] < 0 || nx[n] >= w || ny[n] < 0 || ny[n] >= h) continue;
          const size_t nidx = static_cast<size_t>(ny[n]) * w + nx[n];
          if (visited[nidx] || mask.at(nx[n], ny[n]) != category) continue;
          visited[nidx] = 1;
          stack.push_back(static_cast<int>(nidx));
        }
      }
      const std::tuple<int, int, int, int> box{y0, x0, y1 + 1, x1 + 1};
      if (size > best_size ||
          (size == best_size && std::tie(y0, x0) < std::tie(std::get<0>(best),
                                                             std::get<1>(best)))) {
        best_size = size;
        best = box;
      }
    }
  }
  if (best_size == 0) return std::nullopt;
  return BoundingBox(std::get<1>(best), std::get<0>(best), std::get<3>(best),
                     std::get<2>(best));
}

}  // namespace micl
