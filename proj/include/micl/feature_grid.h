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

#ifndef MICL_FEATURE_GRID_H_
#define MICL_FEATURE_GRID_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace micl {

// Dense H x W x K activation map, stored row-major with channels innermost:
// value(y, x, k) lives at ((y * W) + x) * K + k.
class FeatureGrid {
 public:
  FeatureGrid() = default;
  FeatureGrid(int height, int width, int channels, double fill = 0.0);
  FeatureGrid(int height, int width, int channels, std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return values_.empty(); }

  double at(int y, int x, int k) const { return values_[Index(y, x, k)]; }
  double& at(int y, int x, int k) { return values_[Index(y, x, k)]; }

  // All K channels of one cell.
  std::span<const double> cell(int y, int x) const {
    return {values_.data() + Index(y, x, 0), static_cast<size_t>(channels_)};
  }
  std::span<double> cell(int y, int x) {
    return {values_.data() + Index(y, x, 0), static_cast<size_t>(channels_)};
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool SameShape(const FeatureGrid& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  bool operator==(const FeatureGrid&) const = default;

 private:
  size_t Index(int y, int x, int k) const {
    return (static_cast<size_t>(y) * width_ + x) * channels_ + k;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

// Single real-valued H x W plane (one saliency channel, one category).
class Plane {
 public:
  Plane() = default;
  Plane(int height, int width, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  size_t size() const { return values_.size(); }

  double at(int y, int x) const {
    return values_[static_cast<size_t>(y) * width_ + x];
  }
  double& at(int y, int x) {
    return values_[static_cast<size_t>(y) * width_ + x];
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double Max() const;
  bool operator==(const Plane&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace micl

#endif  // MICL_FEATURE_GRID_H_
