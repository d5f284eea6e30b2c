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

#ifndef MICL_GEOMETRY_H_
#define MICL_GEOMETRY_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace micl {

// Axis-aligned box in integer pixels, half-open: [x_min, x_max) x [y_min, y_max).
// Zero-area and negative-coordinate boxes are rejected at construction.
class BoundingBox {
 public:
  BoundingBox(int x_min, int y_min, int x_max, int y_max);

  int x_min() const { return x_min_; }
  int y_min() const { return y_min_; }
  int x_max() const { return x_max_; }
  int y_max() const { return y_max_; }
  int width() const { return x_max_ - x_min_; }
  int height() const { return y_max_ - y_min_; }
  int64_t area() const { return static_cast<int64_t>(width()) * height(); }

  bool InsideImage(int image_width, int image_height) const {
    return x_max_ <= image_width && y_max_ <= image_height;
  }
  bool Contains(int x, int y) const {
    return x >= x_min_ && x < x_max_ && y >= y_min_ && y < y_max_;
  }

  bool operator==(const BoundingBox&) const = default;

 private:
  int x_min_, y_min_, x_max_, y_max_;
};

std::ostream& operator<<(std::ostream& os, const BoundingBox& box);

// EMPTY is represented by std::nullopt.
using MaybeBox = std::optional<BoundingBox>;

int64_t IntersectionArea(const BoundingBox& a, const BoundingBox& b);
double Iou(const BoundingBox& a, const BoundingBox& b);

// Coordinate-wise mean. Each averaged coordinate is rounded to the nearest
// integer; an exact .5 tie goes toward `detector`'s coordinate.
BoundingBox FuseBoxes(const BoundingBox& detector, const BoundingBox& other);

// Category ids are >= 0; these two values are reserved.
inline constexpr int kBackground = -1;
inline constexpr int kUnlabeled = -2;

class LabeledMask {
 public:
  LabeledMask() = default;
  LabeledMask(int width, int height, int fill = kUnlabeled);

  int width() const { return width_; }
  int height() const { return height_; }
  int at(int x, int y) const { return labels_[Index(x, y)]; }
  int& at(int x, int y) { return labels_[Index(x, y)]; }
  const std::vector<int>& labels() const { return labels_; }

  bool operator==(const LabeledMask&) const = default;

 private:
  size_t Index(int x, int y) const {
    return static_cast<size_t>(y) * width_ + x;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<int> labels_;
};

// Tight box around the largest 4-connected component of `category` pixels.
// Size ties go to the component whose own box has the lexicographically
// lowest (y_min, x_min). Returns nullopt when no pixel carries the category.
MaybeBox LargestComponentBox(const LabeledMask& mask, int category);

}  // namespace micl

#endif  // MICL_GEOMETRY_H_
