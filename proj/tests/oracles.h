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

// Brute-force reference implementations. Written from the definitions, not
// from the library code: per-pixel sampling instead of plane resizing,
// union-find instead of flood fill, per-true-positive area sums instead of a
// precision envelope.

#ifndef MICL_TESTS_ORACLES_H_
#define MICL_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "micl/evaluation.h"
#include "micl/feature_grid.h"
#include "micl/geometry.h"

namespace micl::oracle {

inline std::vector<std::vector<double>> Cam(const FeatureGrid& f, const std::vector<double>& w) {
  std::vector<std::vector<double>> out(f.height(), std::vector<double>(f.width(), 0.0));
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x)
      for (int k = 0; k < f.channels(); ++k) out[y][x] += f.at(y, x, k) * w[k];
  return out;
}

inline std::vector<std::vector<double>> RoiSaliency(const FeatureGrid& f, const FeatureGrid& g) {
  std::vector<std::vector<double>> out(f.height(), std::vector<double>(f.width(), 0.0));
  for (int k = 0; k < f.channels(); ++k)
    for (int y = 0; y < f.height(); ++y)
      for (int x = 0; x < f.width(); ++x) out[y][x] += g.at(y, x, k) * f.at(y, x, k);
  return out;
}

// Value of `src` resized to out_h x out_w, sampled at output pixel (oy, ox).
// Output pixel centres map to source coordinates (o + 1/2) * in / out - 1/2,
// clamped below at 0; neighbours beyond the last row or column repeat it.
inline double BilinearSample(const Plane& src, int out_h, int out_w, int oy, int ox) {
  auto coord = [](int o, int in, int out) {
    return std::max(0.0, (2.0 * o + 1.0) * in / (2.0 * out) - 0.5);
  };
  const double sy = coord(oy, src.height(), out_h);
  const double sx = coord(ox, src.width(), out_w);
  double value = 0.0;
  // Sum over the four integer neighbours with tent weights.
  const int y0 = std::min(static_cast<int>(sy), src.height() - 1);
  const int x0 = std::min(static_cast<int>(sx), src.width() - 1);
  for (int dy = 0; dy <= 1; ++dy) {
    for (int dx = 0; dx <= 1; ++dx) {
      const double wy = dy == 0 ? 1.0 - (sy - y0) : sy - y0;
      const double wx = dx == 0 ? 1.0 - (sx - x0) : sx - x0;
      const int yy = std::min(y0 + dy, src.height() - 1);
      const int xx = std::min(x0 + dx, src.width() - 1);
      value += wy * wx * src.at(yy, xx);
    }
  }
  return value;
}

struct PlacedMap {
  BoundingBox box;
  Plane map;
  double score;
};

inline std::vector<std::vector<double>> Aggregate(const std::vector<PlacedMap>& rois, int h,
                                                  int w) {
  std::vector<std::vector<double>> out(h, std::vector<double>(w, 0.0));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (const PlacedMap& r : rois) {
        if (!r.box.Contains(x, y)) continue;
        out[y][x] += r.score * BilinearSample(r.map, r.box.height(), r.box.width(),
                                              y - r.box.y_min(), x - r.box.x_min());
      }
    }
  }
  return out;
}

inline MaybeBox LargestComponent(const LabeledMask& mask, int category) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> parent(static_cast<size_t>(w) * h);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) != category) continue;
      if (x + 1 < w && mask.at(x + 1, y) == category) unite(y * w + x, y * w + x + 1);
      if (y + 1 < h && mask.at(x, y + 1) == category) unite(y * w + x, (y + 1) * w + x);
    }
  }
  struct Comp {
    int size = 0, x0 = 1 << 30, y0 = 1 << 30, x1 = -1, y1 = -1;
  };
  std::vector<Comp> comps(parent.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) != category) continue;
      Comp& c = comps[find(y * w + x)];
      ++c.size;
      c.x0 = std::min(c.x0, x);
      c.y0 = std::min(c.y0, y);
      c.x1 = std::max(c.x1, x);
      c.y1 = std::max(c.y1, y);
    }
  }
  const Comp* best = nullptr;
  for (const Comp& c : comps) {
    if (c.size == 0) continue;
    if (best == nullptr || c.size > best->size ||
        (c.size == best->size && std::tie(c.y0, c.x0) < std::tie(best->y0, best->x0))) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return BoundingBox(best->x0, best->y0, best->x1 + 1, best->y1 + 1);
}

inline double BoxIou(const BoundingBox& a, const BoundingBox& b) {
  // Pixel counting.
  int inter = 0, uni = 0;
  const int x0 = std::min(a.x_min(), b.x_min()), x1 = std::max(a.x_max(), b.x_max());
  const int y0 = std::min(a.y_min(), b.y_min()), y1 = std::max(a.y_max(), b.y_max());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const bool ia = a.Contains(x, y), ib = b.Contains(x, y);
      inter += ia && ib;
      uni += ia || ib;
    }
  }
  return static_cast<double>(inter) / uni;
}

inline double Corloc(const std::vector<Prediction>& preds,
                     const std::vector<GroundTruthObject>& gt) {
  if (preds.empty()) return 0.0;
  int hits = 0;
  for (const Prediction& p : preds) {
    if (!p.box) continue;
    bool hit = false;
    for (const GroundTruthObject& g : gt) {
      if (g.image_id == p.image_id && g.category == p.category && BoxIou(*p.box, g.box) >= 0.5) {
        hit = true;
      }
    }
    hits += hit;
  }
  return 100.0 * hits / preds.size();
}

// True-positive flags of the ranked detections of `category`.
inline std::vector<bool> RankedHits(const std::vector<ScoredBox>& dets,
                                    const std::vector<GroundTruthObject>& gt, int category) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(dets.size()); ++i) {
    if (dets[i].category == category) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::make_tuple(-dets[a].score, dets[a].image_id, a) <
           std::make_tuple(-dets[b].score, dets[b].image_id, b);
  });
  std::vector<bool> used(gt.size(), false);
  std::vector<bool> hits;
  for (int i : idx) {
    int best = -1;
    double best_iou = 0.5;
    for (int g = 0; g < static_cast<int>(gt.size()); ++g) {
      if (used[g] || gt[g].category != category || gt[g].image_id != dets[i].image_id) continue;
      const double iou = BoxIou(dets[i].box, gt[g].box);
      if (iou >= best_iou && (best < 0 || iou > best_iou)) {
        best = g;
        best_iou = iou;
      }
    }
    if (best >= 0) used[best] = true;
    hits.push_back(best >= 0);
  }
  return hits;
}

inline double AveragePrecision(const std::vector<ScoredBox>& dets,
                               const std::vector<GroundTruthObject>& gt, int category,
                               ApVariant variant) {
  long npos = std::count_if(gt.begin(), gt.end(),
                            [&](const GroundTruthObject& g) { return g.category == category; });
  if (npos == 0) return std::nan("");
  const std::vector<bool> hits = RankedHits(dets, gt, category);
  const int n = static_cast<int>(hits.size());
  std::vector<long> tp(n);
  for (int k = 0; k < n; ++k) tp[k] = (k ? tp[k - 1] : 0) + hits[k];
  auto prec = [&](int k) { return static_cast<double>(tp[k]) / (k + 1); };
  if (variant == ApVariant::kVoc07) {
    double sum = 0.0;
    for (int t = 0; t <= 10; ++t) {
      double p = 0.0;
      for (int k = 0; k < n; ++k) {
        if (10 * tp[k] >= t * npos) p = std::max(p, prec(k));
      }
      sum += p;
    }
    return sum / 11.0;
  }
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!hits[k]) continue;
    double p = 0.0;
    for (int j = k; j < n; ++j) p = std::max(p, prec(j));
    area += p / npos;
  }
  return area;
}

}  // namespace micl::oracle

#endif  // MICL_TESTS_ORACLES_H_
