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

#include "micl/config.h"

#include <gtest/gtest.h>

namespace micl {
namespace {

TEST(ParseKeyValuesTest, CommentsAndWhitespace) {
  const auto kv = ParseKeyValues("# header\n seed = 4 \n\nT=0.6 # inline\n");
  EXPECT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("seed"), "4");
  EXPECT_EQ(kv.at("T"), "0.6");
  EXPECT_THROW(ParseKeyValues("seed 4\n"), ConfigError);
  EXPECT_THROW(ParseKeyValues("seed=1\nseed=2\n"), ConfigError);
}

TEST(ApplySettingsTest, KnownKeys) {
  RunConfig cfg;
  ApplySettings(cfg, {{"seed", "9"}, {"T", "0.7"}, {"max_rounds", "2"}, {"n_images", "30"},
                      {"tau", "0.25"}, {"ap_variant", "area"}, {"surround_prob", "0"}});
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.threshold, 0.7);
  EXPECT_EQ(cfg.max_rounds, 2);
  EXPECT_EQ(cfg.generation.n_images, 30);
  EXPECT_EQ(cfg.ap_variant, ApVariant::kArea);
  const MiclConfig m = cfg.ToMiclConfig();
  EXPECT_EQ(m.threshold, 0.7);
  EXPECT_EQ(m.region_grow.similarity_tolerance, 0.25);
  EXPECT_EQ(m.seed, 9u);
  EXPECT_EQ(cfg.ToGenConfig().seed, 9u);
  EXPECT_EQ(cfg.ToGenConfig().surround_prob, 0.0);
}

TEST(ApplySettingsTest, RejectsBadInput) {
  RunConfig cfg;
  EXPECT_THROW(ApplySetting(cfg, "nope", "1"), ConfigError);
  EXPECT_THROW(ApplySetting(cfg, "seed", "x"), ConfigError);
  EXPECT_THROW(ApplySetting(cfg, "max_rounds", "1.5"), ConfigError);
  EXPECT_THROW(ParseApVariant("voc12"), ConfigError);
}

TEST(RunConfigTest, Validate) {
  RunConfig cfg;
  cfg.Validate();
  cfg.threshold = 1.5;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = RunConfig{};
  cfg.max_rounds = -1;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

}  // namespace
}  // namespace micl
