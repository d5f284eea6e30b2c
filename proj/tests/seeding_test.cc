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

#include "micl/seeding.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace micl {
namespace {

using testing::RandInt;
using testing::RandReal;

TEST(ThresholdObjectSeedsTest, ConstantPlanes) {
  const SeedMask all = ThresholdObjectSeeds({{0, Plane(3, 3, 0.3)}}, {0}, 0.2);
  for (int label : all.labels.labels()) EXPECT_EQ(label, 0);
  const SeedMask none = ThresholdObjectSeeds({{0, Plane(3, 3, 0.1)}}, {0}, 0.2);
  for (int label : none.labels.labels()) EXPECT_EQ(label, kUnlabeled);
}

TEST(ThresholdObjectSeedsTest, MaxRuleAndExistingFilter) {
  Plane a(1, 2, 0.0), b(1, 2, 0.0);
  a.at(0, 0) = 0.5;
  b.at(0, 0) = 0.7;
  a.at(0, 1) = 0.6;
  b.at(0, 1) = 0.6;
  const SeedMask s = ThresholdObjectSeeds({{1, a}, {2, b}}, {1, 2});
  EXPECT_EQ(s.labels.at(0, 0), 2);
  EXPECT_EQ(s.labels.at(1, 0), 1);  // exact tie keeps the lower id
  EXPECT_EQ(s.source_at(0, 0), SeedSource::kObject);
  const SeedMask only1 = ThresholdObjectSeeds({{1, a}, {2, b}}, {1});
  EXPECT_EQ(only1.labels.at(0, 0), 1);
  EXPECT_THROW(ThresholdObjectSeeds({{1, a}}, {1}, 1.0), std::invalid_argument);
}

TEST(ThresholdObjectSeedsTest, MatchesScanOracle) {
  testing::Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    const int h = RandInt(rng, 1, 6), w = RandInt(rng, 1, 6);
    std::map<int, Plane> planes;
    std::set<int> existing;
    for (int c = 0; c < 3; ++c) {
      planes.emplace(c, testing::RandomPlane(rng, h, w, 0, 1));
      if (RandInt(rng, 0, 1)) existing.insert(c);
    }
    const double t = RandReal(rng, 0.05, 0.95);
    const SeedMask s = ThresholdObjectSeeds(planes, existing, t);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int want = kUnlabeled;
        double best = -1;
        for (int c : existing) {
          const double v = planes.at(c).at(y, x);
          if (v >= t && v > best) {
            best = v;
            want = c;
          }
        }
        EXPECT_EQ(s.labels.at(x, y), want);
      }
    }
  }
}

TEST(AdaptiveBackgroundSeedsTest, Examples) {
  const BackgroundSeeds ones = AdaptiveBackgroundSeeds(Plane(4, 5, 1.0));
  EXPECT_DOUBLE_EQ(ones.threshold, 0.9);
  for (int label : ones.seeds.labels.labels()) EXPECT_EQ(label, kBackground);

  const BackgroundSeeds zeros = AdaptiveBackgroundSeeds(Plane(4, 5, 0.0));
  EXPECT_EQ(zeros.threshold, 0.0);
  for (int label : zeros.seeds.labels.labels()) EXPECT_EQ(label, kBackground);
}

TEST(AdaptiveBackgroundSeedsTest, FivePercentHighWalksDownToHalf) {
  Plane bg(10, 10, 0.5);
  for (int i = 0; i < 5; ++i) bg.at(0, i) = 0.95;
  const BackgroundSeeds s = AdaptiveBackgroundSeeds(bg, 0.9, 0.10);
  EXPECT_EQ(s.threshold, 0.5);
  for (int label : s.seeds.labels.labels()) EXPECT_EQ(label, kBackground);
}

TEST(AdaptiveBackgroundSeedsTest, MatchesStepWalkOracle) {
  testing::Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const Plane bg = testing::RandomPlane(rng, RandInt(rng, 1, 8), RandInt(rng, 1, 8), 0, 1);
    const double frac = RandReal(rng, 0.0, 0.6);
    // Integer hundredths avoid accumulating float steps.
    int t = 90;
    auto coverage = [&](int hundredths) {
      int n = 0;
      for (double v : bg.values()) n += v >= hundredths / 100.0;
      return static_cast<double>(n) / bg.size();
    };
    while (t > 0 && coverage(t) < frac) t -= 5;
    const BackgroundSeeds s = AdaptiveBackgroundSeeds(bg, 0.9, frac);
    EXPECT_NEAR(s.threshold, t / 100.0, 1e-12);
    int covered = 0;
    for (int label : s.seeds.labels.labels()) covered += label == kBackground;
    EXPECT_GE(static_cast<double>(covered) / bg.size(), frac);
  }
}

TEST(AdaptiveBackgroundSeedsTest, CoverageMonotoneInMinFraction) {
  testing::Rng rng(3);
  const Plane bg = testing::RandomPlane(rng, 8, 8, 0, 1);
  double last = 1.0;
  for (double f = 0.0; f <= 1.0; f += 0.1) {
    const double t = AdaptiveBackgroundSeeds(bg, 0.9, f).threshold;
    EXPECT_LE(t, last);
    last = t;
  }
}

TEST(PoolSeedsTest, UnionAndPrecedence) {
  SeedMask obj(3, 1), bg(3, 1);
  obj.Set(0, 0, 2, SeedSource::kObject);
  obj.Set(1, 0, 1, SeedSource::kObject);
  bg.Set(1, 0, kBackground, SeedSource::kBackground);
  bg.Set(2, 0, kBackground, SeedSource::kBackground);
  const SeedMask p = PoolSeeds(obj, bg);
  EXPECT_EQ(p.labels.at(0, 0), 2);
  EXPECT_EQ(p.labels.at(1, 0), 1);
  EXPECT_EQ(p.source_at(1, 0), SeedSource::kObject);
  EXPECT_EQ(p.labels.at(2, 0), kBackground);
  EXPECT_THROW(PoolSeeds(SeedMask(2, 2), SeedMask(2, 3)), DimensionError);
}

TEST(PoolSeedsTest, MatchesPerPixelMerge) {
  testing::Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const int w = RandInt(rng, 1, 6), h = RandInt(rng, 1, 6);
    SeedMask obj(w, h), bg(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (RandInt(rng, 0, 1)) obj.Set(x, y, RandInt(rng, 0, 2), SeedSource::kObject);
        if (RandInt(rng, 0, 1)) bg.Set(x, y, kBackground, SeedSource::kBackground);
      }
    const SeedMask p = PoolSeeds(obj, bg);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const bool o = obj.source_at(x, y) == SeedSource::kObject;
        const bool b = bg.source_at(x, y) == SeedSource::kBackground;
        EXPECT_EQ(p.labels.at(x, y), o ? obj.labels.at(x, y) : b ? kBackground : kUnlabeled);
      }
  }
}

}  // namespace
}  // namespace micl
