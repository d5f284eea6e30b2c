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

#include "micl/synthdata.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

namespace micl {

namespace {

constexpr uint64_t kSynthSeedTag = 0x53594e5448444154ull;  // "SYNTHDAT"
constexpr int kPlacementRetries = 50;
constexpr double kOversizeFraction = 0.3;

int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double UniformReal(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool Bernoulli(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// True when `a` overlaps or 4-touches `b`.
bool OverlapsOrTouches(const BoundingBox& a, const BoundingBox& b) {
  return a.x_min() <= b.x_max() && b.x_min() <= a.x_max() &&
         a.y_min() <= b.y_max() && b.y_min() <= a.y_max() &&
         // corner-only contact is not 4-adjacency
         !((a.x_min() == b.x_max() || b.x_min() == a.x_max()) &&
           (a.y_min() == b.y_max() || b.y_min() == a.y_max()));
}

std::optional<BoundingBox> TryBox(int x0, int y0, int w, int h, int width, int height) {
  if (x0 < 0 || y0 < 0 || x0 + w > width || y0 + h > height) return std::nullopt;
  return BoundingBox(x0, y0, x0 + w, y0 + h);
}

BoundingBox PlacePart(const BoundingBox& body, const GenConfig& cfg,
                      std::mt19937_64& rng) {
  const double ratio = UniformReal(rng, cfg.min_part_ratio, cfg.max_part_ratio);
  const double scale = std::sqrt(ratio);
  const int pw = std::clamp(static_cast<int>(std::lround(body.width() * scale)), 1,
                            body.width());
  const int ph = std::clamp(static_cast<int>(std::lround(body.height() * scale)), 1,
                            body.height());
  // Keep a one-pixel body margin around the part when the body allows it.
  const int mx = body.width() - pw >= 2 ? 1 : 0;
  const int my = body.height() - ph >= 2 ? 1 : 0;
  const int x0 = UniformInt(rng, body.x_min() + mx, body.x_max() - mx - pw);
  const int y0 = UniformInt(rng, body.y_min() + my, body.y_max() - my - ph);
  return BoundingBox(x0, y0, x0 + pw, y0 + ph);
}

BoundingBox Oversized(const BoundingBox& body, int width, int height) {
  const int dx = std::max(2, static_cast<int>(std::lround(kOversizeFraction * body.width())));
  const int dy = std::max(2, static_cast<int>(std::lround(kOversizeFraction * body.height())));
  return BoundingBox(std::max(0, body.x_min() - dx), std::max(0, body.y_min() - dy),
                     std::min(width, body.x_max() + dx), std::min(height, body.y_max() + dy));
}

// Extent an object claims in the scene: its body, plus the surround ring
// when it has one.
BoundingBox Footprint(const BoundingBox& body, bool surround, int width, int height) {
  return surround ? Oversized(body, width, height) : body;
}

Scene GenerateScene(const GenConfig& cfg, int index) {
  std::mt19937_64 rng(SplitMix64(SplitMix64(cfg.seed ^ kSynthSeedTag) + static_cast<uint64_t>(index)));
  Scene scene;
  scene.id = index;

  std::vector<SceneObject> objects;
  std::vector<BoundingBox> footprints;
  std::vector<bool> discriminative;
  std::vector<bool> surround;

  auto fits = [&](const BoundingBox& fp, int ignore) {
    for (size_t i = 0; i < footprints.size(); ++i) {
      if (static_cast<int>(i) != ignore && OverlapsOrTouches(fp, footprints[i])) return false;
    }
    return true;
  };
  auto place = [&](int category, const BoundingBox& body, bool ring) {
    objects.push_back({category, body, PlacePart(body, cfg, rng)});
    footprints.push_back(Footprint(body, ring, cfg.width, cfg.height));
    discriminative.push_back(Bernoulli(rng, cfg.discriminative_part_prob));
    surround.push_back(ring);
  };

  const int n_objects = UniformInt(rng, cfg.min_objects, cfg.max_objects);
  for (int n = 0; n < n_objects; ++n) {
    const int category = UniformInt(rng, 0, cfg.n_categories - 1);
    const bool ring = Bernoulli(rng, cfg.surround_prob);
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementRetries && !placed; ++attempt) {
      const int w = UniformInt(rng, cfg.min_body_size, cfg.max_body_size);
      const int h = UniformInt(rng, cfg.min_body_size, cfg.max_body_size);
      if (w > cfg.width || h > cfg.height) break;
      const auto box = TryBox(UniformInt(rng, 0, cfg.width - w),
                              UniformInt(rng, 0, cfg.height - h), w, h, cfg.width, cfg.height);
      if (box && fits(Footprint(*box, ring, cfg.width, cfg.height), -1)) {
        place(category, *box, ring);
        placed = true;
      }
    }
    if (!placed) {
      std::clog << "synthdata: image " << index << ": skipped object " << n
                << " after " << kPlacementRetries << " placement retries\n";
      continue;
    }
    if (ring || !Bernoulli(rng, cfg.cluster_prob)) continue;

    // A same-category neighbour sharing an edge with the object just placed.
    const int anchor = static_cast<int>(objects.size()) - 1;
    const BoundingBox a = objects[anchor].body;
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
      const int w = UniformInt(rng, cfg.min_body_size, cfg.max_body_size);
      const int h = UniformInt(rng, cfg.min_body_size, cfg.max_body_size);
      const int side = UniformInt(rng, 0, 3);
      std::optional<BoundingBox> box;
      if (side < 2) {
        const int off = UniformInt(rng, -h / 3, h / 3);
        const int x0 = side == 0 ? a.x_max() : a.x_min() - w;
        box = TryBox(x0, a.y_min() + off, w, h, cfg.width, cfg.height);
      } else {
        const int off = UniformInt(rng, -w / 3, w / 3);
        const int y0 = side == 2 ? a.y_max() : a.y_min() - h;
        box = TryBox(a.x_min() + off, y0, w, h, cfg.width, cfg.height);
      }
      if (box && IntersectionArea(*box, a) == 0 && fits(*box, anchor)) {
        place(objects[anchor].category, *box, false);
        break;
      }
    }
  }

  const int C = cfg.n_categories;
  const int context_channel = 2 * C + 1;
  FeatureGrid f(cfg.height, cfg.width, cfg.channels);
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) f.at(y, x, 2 * C) = cfg.background_value;
  }
  // Rings first so that a neighbouring body is never overwritten.
  for (size_t i = 0; i < objects.size(); ++i) {
    if (!surround[i]) continue;
    const BoundingBox& fp = footprints[i];
    for (int y = fp.y_min(); y < fp.y_max(); ++y) {
      for (int x = fp.x_min(); x < fp.x_max(); ++x) {
        auto cell = f.cell(y, x);
        std::fill(cell.begin(), cell.end(), 0.0);
        cell[objects[i].category] = cfg.surround_body_value;
        cell[context_channel] = cfg.surround_context_value;
      }
    }
  }
  // A non-discriminative part spreads its norm evenly over every category's
  // part channel.
  const double shared_part = cfg.part_value / std::sqrt(static_cast<double>(C));
  for (size_t i = 0; i < objects.size(); ++i) {
    const SceneObject& o = objects[i];
    for (int y = o.body.y_min(); y < o.body.y_max(); ++y) {
      for (int x = o.body.x_min(); x < o.body.x_max(); ++x) {
        auto cell = f.cell(y, x);
        std::fill(cell.begin(), cell.end(), 0.0);
        if (!o.part.Contains(x, y)) {
          cell[o.category] = cfg.body_value;
        } else if (discriminative[i]) {
          cell[C + o.category] = cfg.part_value;
        } else {
          for (int c = 0; c < C; ++c) cell[C + c] = shared_part;
        }
      }
    }
  }
  if (cfg.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
    for (double& v : f.values()) v += noise(rng);
  }
  // Stored precision is float32 so that the dataset file round-trips exactly.
  for (double& v : f.values()) v = static_cast<double>(static_cast<float>(v));
  scene.features = std::move(f);

  std::set<int> labels;
  for (const SceneObject& o : objects) labels.insert(o.category);
  scene.labels.assign(labels.begin(), labels.end());

  std::vector<BoundingBox> proposals;
  auto add = [&](const BoundingBox& b) {
    if (std::find(proposals.begin(), proposals.end(), b) == proposals.end()) {
      proposals.push_back(b);
    }
  };
  for (const SceneObject& o : objects) {
    add(o.part);
    add(o.body);
    add(Oversized(o.body, cfg.width, cfg.height));
  }
  for (const BoundingBox& b : GridProposals(cfg.height, cfg.width)) add(b);
  scene.proposals = std::move(proposals);
  scene.objects = std::move(objects);
  return scene;
}

}  // namespace

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void GenConfig::Validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("GenConfig: " + what); };
  if (n_images < 0) fail("n_images < 0");
  if (n_categories < 1) fail("n_categories < 1");
  if (height < 1 || width < 1) fail("image size < 1");
  if (channels < 2 * n_categories + 2) fail("channels < 2 * n_categories + 2");
  if (min_objects < 0 || max_objects < min_objects) fail("bad objects-per-image range");
  if (min_body_size < 3 || max_body_size < min_body_size) fail("bad body size range");
  if (!(min_part_ratio > 0.0 && max_part_ratio < 1.0 && min_part_ratio <= max_part_ratio)) {
    fail("part ratios must lie in (0,1)");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) fail("noise sigma < 0");
  if (discriminative_part_prob < 0.0 || discriminative_part_prob > 1.0) {
    fail("discriminative_part_prob outside [0,1]");
  }
  if (cluster_prob < 0.0 || cluster_prob > 1.0) fail("cluster_prob outside [0,1]");
  if (surround_prob < 0.0 || surround_prob > 1.0) fail("surround_prob outside [0,1]");
}

std::vector<BoundingBox> GridProposals(int height, int width) {
  std::vector<BoundingBox> boxes;
  for (int side : {8, 16, 24}) {
    for (int y = 0; y + side <= height; y += 8) {
      for (int x = 0; x + side <= width; x += 8) {
        boxes.emplace_back(x, y, x + side, y + side);
      }
    }
  }
  boxes.emplace_back(0, 0, width, height);
  return boxes;
}

Dataset Generate(const GenConfig& config) {
  config.Validate();
  Dataset ds;
  ds.num_categories = config.n_categories;
  ds.images.resize(config.n_images);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < config.n_images; ++i) ds.images[i] = GenerateScene(config, i);
  return ds;
}

std::vector<GroundTruthObject> Dataset::GroundTruth() const {
  std::vector<GroundTruthObject> gt;
  for (const Scene& s : images) {
    for (const SceneObject& o : s.objects) gt.push_back({s.id, o.category, o.body});
  }
  return gt;
}

PlantReport PlantedBiasCheck(const Dataset& dataset) {
  PlantReport report;
  for (const Scene& s : dataset.images) {
    ++report.images_checked;
    bool ok = true;
    for (const SceneObject& o : s.objects) {
      double part_sum = 0.0, body_sum = 0.0;
      int part_n = 0, body_n = 0;
      for (int y = o.body.y_min(); y < o.body.y_max(); ++y) {
        for (int x = o.body.x_min(); x < o.body.x_max(); ++x) {
          double n2 = 0.0;
          for (double v : s.features.cell(y, x)) n2 += v * v;
          if (o.part.Contains(x, y)) {
            part_sum += std::sqrt(n2);
            ++part_n;
          } else {
            body_sum += std::sqrt(n2);
            ++body_n;
          }
        }
      }
      if (part_n == 0 || body_n == 0) continue;
      if (part_sum / part_n < 2.0 * (body_sum / body_n)) ok = false;
    }
    if (ok) {
      ++report.images_planted;
    } else {
      report.degraded_image_ids.push_back(s.id);
    }
  }
  return report;
}

}  // namespace micl
