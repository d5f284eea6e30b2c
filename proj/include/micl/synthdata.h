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

// Feature-space scenes with part-trapped objects. Each object is a body
// rectangle of a category-specific feature plus an interior part whose
// feature norm is well above the body's. Proposals always contain the
// part-tight, body-tight and an oversized box for every object, plus a
// fixed grid. Some objects sit inside a surround ring (think grass under a
// cow) that looks enough like the body for region growing to swallow it;
// the ring spans exactly the oversized proposal.
//
// Channel layout (K >= 2C + 2):
//   [0, C)      body channel of category c
//   [C, 2C)     part channel of category c
//   2C          background
//   2C + 1      surround context

#ifndef MICL_SYNTHDATA_H_
#define MICL_SYNTHDATA_H_

#include <cstdint>
#include <vector>

#include "micl/evaluation.h"
#include "micl/feature_grid.h"
#include "micl/geometry.h"

namespace micl {

struct SceneObject {
  int category;
  BoundingBox body;
  BoundingBox part;

  bool operator==(const SceneObject&) const = default;
};

struct Scene {
  int id = 0;
  FeatureGrid features;
  std::vector<int> labels;  // sorted existing categories
  std::vector<SceneObject> objects;
  std::vector<BoundingBox> proposals;

  bool operator==(const Scene&) const = default;
};

struct Dataset {
  int num_categories = 0;
  std::vector<Scene> images;

  std::vector<GroundTruthObject> GroundTruth() const;
  bool operator==(const Dataset&) const = default;
};

struct GenConfig {
  int n_images = 200;
  int n_categories = 3;
  int height = 32;
  int width = 32;
  int channels = 8;
  int min_objects = 1;
  int max_objects = 2;
  int min_body_size = 9;
  int max_body_size = 15;
  double min_part_ratio = 0.10;  // part area / body area
  double max_part_ratio = 0.20;
  double noise_sigma = 0.05;
  // Probability that a part uses its category's own channel; the rest
  // spread the same norm over every category's part channel.
  double discriminative_part_prob = 0.6;
  // Probability of adding a same-category instance touching an object
  // (objects with a surround ring never get one).
  double cluster_prob = 0.25;
  // Probability that an object gets a surround ring, and the ring's
  // feature: a faint body response plus the context channel.
  double surround_prob = 0.45;
  double surround_body_value = 0.25;
  double surround_context_value = 0.3;
  double body_value = 0.5;
  double part_value = 1.2;
  double background_value = 0.6;
  uint64_t seed = 0;

  void Validate() const;
};

// Deterministic in `seed`; image i draws from its own seed-derived stream,
// so generation parallelizes per image. Objects that cannot be placed after
// a bounded number of retries are skipped.
Dataset Generate(const GenConfig& config);

// Coarse grid shared by every image: square boxes of side 8, 16, 24 at
// stride 8 plus the full image.
std::vector<BoundingBox> GridProposals(int height, int width);

struct PlantReport {
  int images_checked = 0;
  int images_planted = 0;  // every object's part norm >= 2x its body norm
  std::vector<int> degraded_image_ids;
  double fraction() const {
    return images_checked == 0 ? 0.0
                               : static_cast<double>(images_planted) / images_checked;
  }
};

// Mean per-pixel feature norm over each part against the body pixels
// outside it.
PlantReport PlantedBiasCheck(const Dataset& dataset);

uint64_t SplitMix64(uint64_t x);

}  // namespace micl

#endif  // MICL_SYNTHDATA_H_
