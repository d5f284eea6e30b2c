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

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"

namespace micl::kernels {
namespace {

using micl::testing::RandInt;
using micl::testing::Vec;
using micl::testing::RandomBox;
using micl::testing::RandomGrid;
using micl::testing::RandomPlane;

// The parallel kernels must reproduce the serial ones bit for bit.
class SerialParallelTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override { SetWorkerCount(GetParam()); }
  void TearDown() override { SetWorkerCount(0); }
};

TEST_P(SerialParallelTest, ChannelSums) {
  micl::testing::Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const FeatureGrid a = RandomGrid(rng, RandInt(rng, 1, 40), RandInt(rng, 1, 40), RandInt(rng, 1, 9));
    const FeatureGrid b = RandomGrid(rng, a.height(), a.width(), a.channels());
    std::vector<double> w(a.channels());
    for (double& v : w) v = micl::testing::RandReal(rng, -1, 1);
    EXPECT_EQ(Vec(serial::ChannelWeightedSum(a, w).values()), Vec(parallel::ChannelWeightedSum(a, w).values()));
    EXPECT_EQ(Vec(serial::ProductChannelSum(a, b).values()), Vec(parallel::ProductChannelSum(a, b).values()));
  }
}

TEST_P(SerialParallelTest, ResizeAndAggregate) {
  micl::testing::Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Plane p = RandomPlane(rng, RandInt(rng, 1, 9), RandInt(rng, 1, 9));
    const int oh = RandInt(rng, 1, 30), ow = RandInt(rng, 1, 30);
    EXPECT_EQ(Vec(serial::BilinearResize(p, oh, ow).values()), Vec(parallel::BilinearResize(p, oh, ow).values()));
    std::vector<Plane> maps;
    for (int r = 0; r < 20; ++r) maps.push_back(RandomPlane(rng, 4, 4));
    std::vector<PlacedPlane> rois;
    for (const Plane& m : maps) rois.push_back({RandomBox(rng, ow, oh), &m, micl::testing::RandReal(rng, 0, 1)});
    EXPECT_EQ(Vec(serial::Aggregate(rois, oh, ow).values()), Vec(parallel::Aggregate(rois, oh, ow).values()));
  }
}

TEST_P(SerialParallelTest, RoiMaxPool) {
  micl::testing::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const FeatureGrid f = RandomGrid(rng, RandInt(rng, 1, 20), RandInt(rng, 1, 20), RandInt(rng, 1, 6));
    const BoundingBox box = RandomBox(rng, f.width(), f.height());
    const int p = RandInt(rng, 1, 6);
    const PooledWithArgmax s = serial::RoiMaxPool(f, box, p);
    const PooledWithArgmax q = parallel::RoiMaxPool(f, box, p);
    EXPECT_EQ(Vec(s.pooled.values()), Vec(q.pooled.values()));
    EXPECT_EQ(s.argmax, q.argmax);
  }
}

INSTANTIATE_TEST_SUITE_P(Workers, SerialParallelTest, ::testing::Values(1, 2, 4));

TEST(PoolCellTest, PartitionsWhenLengthCoversCells) {
  for (int len = 1; len <= 20; ++len) {
    for (int p = 1; p <= len; ++p) {
      int next = 0;
      for (int i = 0; i < p; ++i) {
        const CellRange r = PoolCell(i, len, p);
        EXPECT_EQ(r.begin, next);
        EXPECT_GT(r.end, r.begin);
        next = r.end;
      }
      EXPECT_EQ(next, len);
    }
  }
}

TEST(PoolCellTest, NeverEmpty) {
  for (int len = 1; len <= 6; ++len)
    for (int p = 1; p <= 8; ++p)
      for (int i = 0; i < p; ++i) {
        const CellRange r = PoolCell(i, len, p);
        EXPECT_GE(r.begin, 0);
        EXPECT_LE(r.end, len);
        EXPECT_GT(r.end, r.begin);
      }
}

TEST(BilinearResizeTest, MatchesPerPixelOracle) {
  micl::testing::Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const Plane p = RandomPlane(rng, RandInt(rng, 1, 8), RandInt(rng, 1, 8));
    const int oh = RandInt(rng, 1, 12), ow = RandInt(rng, 1, 12);
    const Plane out = serial::BilinearResize(p, oh, ow);
    for (int y = 0; y < oh; ++y)
      for (int x = 0; x < ow; ++x)
        EXPECT_NEAR(out.at(y, x), oracle::BilinearSample(p, oh, ow, y, x), 1e-12);
  }
}

TEST(BilinearResizeTest, ConstantStaysConstantAndSameSizeIsIdentity) {
  micl::testing::Rng rng(5);
  const Plane c(3, 5, 0.7);
  for (double v : Vec(serial::BilinearResize(c, 11, 2).values())) EXPECT_NEAR(v, 0.7, 1e-15);
  const Plane p = RandomPlane(rng, 4, 6);
  EXPECT_EQ(Vec(serial::BilinearResize(p, 4, 6).values()), Vec(p.values()));
}

}  // namespace
}  // namespace micl::kernels
