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

// Dense inner loops of the saliency and pooling paths. Every kernel exists
// twice: `serial` is the straightforward reference kept for testing and
// benchmarking, `parallel` splits the outer loop with OpenMP. Both produce
// bit-identical results (no cross-thread reductions).

#ifndef MICL_KERNELS_H_
#define MICL_KERNELS_H_

#include <span>
#include <vector>

#include "micl/feature_grid.h"
#include "micl/geometry.h"

namespace micl::kernels {

// One RoI's contribution to an aggregated image map.
struct PlacedPlane {
  BoundingBox box;
  const Plane* plane;
  double weight;
};

// Source pixel of each pooled value, as y * W + x of the image grid.
struct PooledWithArgmax {
  FeatureGrid pooled;
  std::vector<int> argmax;  // same layout as pooled.values()
};

namespace serial {

Plane ChannelWeightedSum(const FeatureGrid& f, std::span<const double> weights);
Plane ProductChannelSum(const FeatureGrid& a, const FeatureGrid& b);
Plane BilinearResize(const Plane& src, int out_height, int out_width);
Plane Aggregate(std::span<const PlacedPlane> rois, int height, int width);
PooledWithArgmax RoiMaxPool(const FeatureGrid& image, const BoundingBox& box,
                            int pooled_size);

}  // namespace serial

namespace parallel {

Plane ChannelWeightedSum(const FeatureGrid& f, std::span<const double> weights);
Plane ProductChannelSum(const FeatureGrid& a, const FeatureGrid& b);
Plane BilinearResize(const Plane& src, int out_height, int out_width);
Plane Aggregate(std::span<const PlacedPlane> rois, int height, int width);
PooledWithArgmax RoiMaxPool(const FeatureGrid& image, const BoundingBox& box,
                            int pooled_size);

}  // namespace parallel

// Start/end of pooled cell `i` along an extent of `length` pixels split into
// `pooled_size` cells (half-open, floor rounding). Empty cells borrow the
// nearest non-empty cell, lower index on ties.
struct CellRange {
  int begin;
  int end;
};
CellRange PoolCell(int i, int length, int pooled_size);

// Sets the OpenMP worker count used by the parallel kernels; <= 0 keeps the
// runtime default.
void SetWorkerCount(int workers);
int WorkerCount();

}  // namespace micl::kernels

#endif  // MICL_KERNELS_H_
