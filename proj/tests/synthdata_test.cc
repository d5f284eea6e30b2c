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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace micl {
namespace {

bool Inside(const BoundingBox& inner, const BoundingBox& outer) {
  return inner.x_min() >= outer.x_min() && inner.y_min() >= outer.y_min() &&
         inner.x_max() <= outer.x_max() && inner.y_max() <= outer.y_max();
}

void ExpectInvariants(const Dataset& d, const GenConfig& cfg) {
  EXPECT_EQ(d.num_categories, cfg.n_categories);
  ASSERT_EQ(static_cast<int>(d.images.size()), cfg.n_images);
  const BoundingBox frame(0, 0, cfg.width, cfg.height);
  for (size_t i = 0; i < d.images.size(); ++i) {
    const Scene& s = d.images[i];
    EXPECT_EQ(s.id, static_cast<int>(i));
    EXPECT_EQ(s.features.height(), cfg.height);
    EXPECT_EQ(s.features.width(), cfg.width);
    EXPECT_EQ(s.features.channels(), cfg.channels);
    for (double v : s.features.values()) EXPECT_TRUE(std::isfinite(v));
    std::set<int> cats;
    for (const SceneObject& o : s.objects) {
      cats.insert(o.category);
      EXPECT_TRUE(Inside(o.body, frame));
      EXPECT_TRUE(Inside(o.part, o.body));
      EXPECT_LT(Iou(o.part, o.body), 0.5);
      EXPECT_NE(std::find(s.proposals.begin(), s.proposals.end(), o.body), s.proposals.end());
      EXPECT_NE(std::find(s.proposals.begin(), s.proposals.end(), o.part), s.proposals.end());
    }
    EXPECT_EQ(s.labels, std::vector<int>(cats.begin(), cats.end()));
    for (const BoundingBox& p : s.proposals) EXPECT_TRUE(Inside(p, frame));
  }
}

TEST(GenerateTest, DefaultConfigInvariants) {
  GenConfig cfg;
  cfg.n_images = 40;
  ExpectInvariants(Generate(cfg), cfg);
}

TEST(GenerateTest, SingleObjectScene) {
  GenConfig cfg;
  cfg.n_images = 1;
  cfg.min_objects = cfg.max_objects = 1;
  cfg.cluster_prob = 0.0;
  const Dataset d = Generate(cfg);
  ASSERT_EQ(d.images.size(), 1u);
  EXPECT_EQ(d.images[0].objects.size(), 1u);
  EXPECT_EQ(d.GroundTruth().size(), 1u);
  ExpectInvariants(d, cfg);
}

TEST(GenerateTest, NoiselessBodiesAreExact) {
  GenConfig cfg;
  cfg.n_images = 20;
  cfg.noise_sigma = 0.0;
  for (const Scene& s : Generate(cfg).images) {
    for (const SceneObject& o : s.objects) {
      for (int y = o.body.y_min(); y < o.body.y_max(); ++y)
        for (int x = o.body.x_min(); x < o.body.x_max(); ++x) {
          const bool in_part = std::any_of(s.objects.begin(), s.objects.end(), [&](const SceneObject& q) {
            return q.part.Contains(x, y);
          });
          if (!in_part) EXPECT_EQ(s.features.at(y, x, o.category), cfg.body_value);
        }
    }
  }
}

TEST(GenerateTest, DeterministicInSeed) {
  GenConfig cfg;
  cfg.n_images = 15;
  cfg.seed = 77;
  EXPECT_EQ(Generate(cfg), Generate(cfg));
  GenConfig other = cfg;
  other.seed = 78;
  EXPECT_FALSE(Generate(cfg) == Generate(other));
}

TEST(GenerateTest, RejectsBadConfig) {
  GenConfig cfg;
  cfg.channels = 2 * cfg.n_categories + 1;
  EXPECT_THROW(Generate(cfg), std::invalid_argument);
  cfg = GenConfig{};
  cfg.surround_prob = 1.5;
  EXPECT_THROW(Generate(cfg), std::invalid_argument);
}

TEST(GenerateTest, EmptyDataset) {
  GenConfig cfg;
  cfg.n_images = 0;
  const Dataset d = Generate(cfg);
  EXPECT_TRUE(d.images.empty());
  const PlantReport r = PlantedBiasCheck(d);
  EXPECT_EQ(r.images_checked, 0);
  EXPECT_TRUE(r.degraded_image_ids.empty());
}

TEST(PlantedBiasCheckTest, DefaultIsFullyPlanted) {
  GenConfig cfg;
  cfg.n_images = 100;
  const PlantReport r = PlantedBiasCheck(Generate(cfg));
  EXPECT_EQ(r.images_checked, 100);
  EXPECT_EQ(r.fraction(), 1.0);
}

TEST(PlantedBiasCheckTest, HeavyNoiseDegradesPlant) {
  GenConfig cfg;
  cfg.n_images = 100;
  cfg.noise_sigma = 2.0;
  const PlantReport r = PlantedBiasCheck(Generate(cfg));
  EXPECT_LT(r.fraction(), 1.0);
  EXPECT_FALSE(r.degraded_image_ids.empty());
}

TEST(GridProposalsTest, InsideImageAndIncludesFrame) {
  const auto grid = GridProposals(32, 32);
  EXPECT_NE(std::find(grid.begin(), grid.end(), BoundingBox(0, 0, 32, 32)), grid.end());
  for (const BoundingBox& b : grid) EXPECT_TRUE(Inside(b, BoundingBox(0, 0, 32, 32)));
}

}  // namespace
}  // namespace micl
