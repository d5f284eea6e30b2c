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

#include "micl/kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace micl::kernels {

CellRange PoolCell(int i, int length, int pooled_size) {
  auto range = [&](int j) {
    return CellRange{j * length / pooled_size, (j + 1) * length / pooled_size};
  };
  CellRange r = range(i);
  if (r.end > r.begin) return r;
  for (int d = 1; d < pooled_size; ++d) {
    if (i - d >= 0) {
      r = range(i - d);
      if (r.end > r.begin) return r;
    }
    if (i + d < pooled_size) {
      r = range(i + d);
      if (r.end > r.begin) return r;
    }
  }
  return CellRange{0, length};
}

void SetWorkerCount(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

int WorkerCount() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

void CheckWeights(const FeatureGrid& f, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != f.channels()) {
    throw DimensionError("channel-weighted sum: " +
                         std::to_string(weights.size()) + " weights for " +
                         std::to_string(f.channels()) + " channels");
  }
}

void CheckSameShape(const FeatureGrid& a, const FeatureGrid& b) {
  if (!a.SameShape(b)) throw DimensionError("product channel sum: shape mismatch");
}

void CheckPoolArgs(const FeatureGrid& image, const BoundingBox& box,
                   int pooled_size) {
  if (pooled_size < 1) throw std::invalid_argument("RoI pool: pooled size < 1");
  if (!box.InsideImage(image.width(), image.height())) {
    throw std::invalid_argument("RoI pool: box outside image");
  }
}

// Row `y` of ChannelWeightedSum.
inline void WeightedRow(const FeatureGrid& f, std::span<const double> w, int y,
                        Plane& out) {
  for (int x = 0; x < f.width(); ++x) {
    const auto cell = f.cell(y, x);
    double acc = 0.0;
    for (int k = 0; k < f.channels(); ++k) acc += cell[k] * w[k];
    out.at(y, x) = acc;
  }
}

inline void ProductRow(const FeatureGrid& a, const FeatureGrid& b, int y,
                       Plane& out) {
  for (int x = 0; x < a.width(); ++x) {
    const auto ca = a.cell(y, x);
    const auto cb = b.cell(y, x);
    double acc = 0.0;
    for (int k = 0; k < a.channels(); ++k) acc += ca[k] * cb[k];
    out.at(y, x) = acc;
  }
}

// Source coordinate for output index `o` under half-pixel-center sampling.
struct Tap {
  int lo;
  int hi;
  double frac;
};

inline Tap SampleTap(int o, int in_len, int out_len) {
  double s = (o + 0.5) * static_cast<double>(in_len) / out_len - 0.5;
  if (s < 0.0) s = 0.0;
  int lo = static_cast<int>(std::floor(s));
  if (lo > in_len - 1) lo = in_len - 1;
  const int hi = std::min(lo + 1, in_len - 1);
  return Tap{lo, hi, s - lo};
}

inline void ResizeRow(const Plane& src, int y, int out_width, const Tap& ty,
                      Plane& out) {
  for (int x = 0; x < out_width; ++x) {
    const Tap tx = SampleTap(x, src.width(), out_width);
    const double top =
        src.at(ty.lo, tx.lo) * (1.0 - tx.frac) + src.at(ty.lo, tx.hi) * tx.frac;
    const double bottom =
        src.at(ty.hi, tx.lo) * (1.0 - tx.frac) + src.at(ty.hi, tx.hi) * tx.frac;
    out.at(y, x) = top * (1.0 - ty.frac) + bottom * ty.frac;
  }
}

inline void PoolCellAllChannels(const FeatureGrid& image, const BoundingBox& box,
                                int pooled_size, int py, int px,
                                PooledWithArgmax& out) {
  const CellRange ry = PoolCell(py, box.height(), pooled_size);
  const CellRange rx = PoolCell(px, box.width(), pooled_size);
  const int channels = image.channels();
  for (int k = 0; k < channels; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    int best_idx = -1;
    for (int y = box.y_min() + ry.begin; y < box.y_min() + ry.end; ++y) {
      for (int x = box.x_min() + rx.begin; x < box.x_min() + rx.end; ++x) {
        const double v = image.at(y, x, k);
        if (v > best) {
          best = v;
          best_idx = y * image.width() + x;
        }
      }
    }
    out.pooled.at(py, px, k) = best;
    out.argmax[(static_cast<size_t>(py) * pooled_size + px) * channels + k] =
        best_idx;
  }
}

PooledWithArgmax MakePooled(const FeatureGrid& image, int pooled_size) {
  PooledWithArgmax out{FeatureGrid(pooled_size, pooled_size, image.channels()),
                       {}};
  out.argmax.assign(out.pooled.values().size(), -1);
  return out;
}

void CheckAggregate(std::span<const PlacedPlane> rois, int height, int width) {
  for (const auto& r : rois) {
    if (!r.box.InsideImage(width, height)) {
      throw std::invalid_argument("aggregate: RoI box outside image");
    }
  }
}

}  // namespace

namespace serial {

Plane ChannelWeightedSum(const FeatureGrid& f, std::span<const double> weights) {
  CheckWeights(f, weights);
  Plane out(f.height(), f.width());
  for (int y = 0; y < f.height(); ++y) WeightedRow(f, weights, y, out);
  return out;
}

Plane ProductChannelSum(const FeatureGrid& a, const FeatureGrid& b) {
  CheckSameShape(a, b);
  Plane out(a.height(), a.width());
  for (int y = 0; y < a.height(); ++y) ProductRow(a, b, y, out);
  return out;
}

Plane BilinearResize(const Plane& src, int out_height, int out_width) {
  Plane out(out_height, out_width);
  for (int y = 0; y < out_height; ++y) {
    ResizeRow(src, y, out_width, SampleTap(y, src.height(), out_height), out);
  }
  return out;
}

Plane Aggregate(std::span<const PlacedPlane> rois, int height, int width) {
  CheckAggregate(rois, height, width);
  Plane out(height, width);
  for (const auto& r : rois) {
    const Plane resized = BilinearResize(*r.plane, r.box.height(), r.box.width());
    for (int y = 0; y < r.box.height(); ++y) {
      for (int x = 0; x < r.box.width(); ++x) {
        out.at(r.box.y_min() + y, r.box.x_min() + x) += r.weight * resized.at(y, x);
      }
    }
  }
  return out;
}

PooledWithArgmax RoiMaxPool(const FeatureGrid& image, const BoundingBox& box,
                            int pooled_size) {
  CheckPoolArgs(image, box, pooled_size);
  PooledWithArgmax out = MakePooled(image, pooled_size);
  for (int py = 0; py < pooled_size; ++py) {
    for (int px = 0; px < pooled_size; ++px) {
      PoolCellAllChannels(image, box, pooled_size, py, px, out);
    }
  }
  return out;
}

}  // namespace serial

namespace parallel {

Plane ChannelWeightedSum(const FeatureGrid& f, std::span<const double> weights) {
  CheckWeights(f, weights);
  Plane out(f.height(), f.width());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < f.height(); ++y) WeightedRow(f, weights, y, out);
  return out;
}

Plane ProductChannelSum(const FeatureGrid& a, const FeatureGrid& b) {
  CheckSameShape(a, b);
  Plane out(a.height(), a.width());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < a.height(); ++y) ProductRow(a, b, y, out);
  return out;
}

Plane BilinearResize(const Plane& src, int out_height, int out_width) {
  Plane out(out_height, out_width);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out_height; ++y) {
    ResizeRow(src, y, out_width, SampleTap(y, src.height(), out_height), out);
  }
  return out;
}

Plane Aggregate(std::span<const PlacedPlane> rois, int height, int width) {
  CheckAggregate(rois, height, width);
  const int n = static_cast<int>(rois.size());
  std::vector<Plane> resized(rois.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    resized[i] = serial::BilinearResize(*rois[i].plane, rois[i].box.height(),
                                        rois[i].box.width());
  }
  // Rows are independent; within a pixel RoIs are summed in input order,
  // which keeps the result identical to the serial path.
  Plane out(height, width);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int i = 0; i < n; ++i) {
      const BoundingBox& b = rois[i].box;
      if (y < b.y_min() || y >= b.y_max()) continue;
      for (int x = b.x_min(); x < b.x_max(); ++x) {
        out.at(y, x) += rois[i].weight * resized[i].at(y - b.y_min(), x - b.x_min());
      }
    }
  }
  return out;
}

PooledWithArgmax RoiMaxPool(const FeatureGrid& image, const BoundingBox& box,
                            int pooled_size) {
  CheckPoolArgs(image, box, pooled_size);
  PooledWithArgmax out = MakePooled(image, pooled_size);
  const int cells = pooled_size * pooled_size;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < cells; ++c) {
    PoolCellAllChannels(image, box, pooled_size, c / pooled_size,
                        c % pooled_size, out);
  }
  return out;
}

}  // namespace parallel

}  // namespace micl::kernels
