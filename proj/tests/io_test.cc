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

#include "micl/io.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_util.h"

namespace micl {
namespace {

TEST(Base64Test, KnownVectorsAndRoundTrip) {
  auto enc = [](std::string_view s) {
    return Base64Encode({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
  };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
  testing::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    std::vector<unsigned char> bytes(testing::RandInt(rng, 0, 40));
    for (auto& b : bytes) b = static_cast<unsigned char>(testing::RandInt(rng, 0, 255));
    EXPECT_EQ(Base64Decode(Base64Encode(bytes)), bytes);
  }
  EXPECT_THROW(Base64Decode("Zm9"), FormatError);
  EXPECT_THROW(Base64Decode("Z!9v"), FormatError);
}

GenConfig SmallGen(uint64_t seed) {
  GenConfig cfg;
  cfg.n_images = 3;
  cfg.height = cfg.width = 16;
  cfg.min_body_size = 5;
  cfg.max_body_size = 8;
  cfg.seed = seed;
  return cfg;
}

TEST(DatasetJsonTest, RoundTripsBytes) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = Generate(SmallGen(seed));
    const std::string text = SerializeDataset(d);
    const Dataset back = ParseDataset(text);
    EXPECT_EQ(SerializeDataset(back), text);
    EXPECT_EQ(back.images.size(), d.images.size());
    EXPECT_EQ(back.images[0].objects, d.images[0].objects);
    EXPECT_EQ(back.images[0].proposals, d.images[0].proposals);
  }
}

TEST(DatasetJsonTest, FeaturesStoredAsFloat32) {
  const Dataset d = Generate(SmallGen(1));
  const Dataset back = ParseDataset(SerializeDataset(d));
  const auto a = d.images[0].features.values();
  const auto b = back.images[0].features.values();
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(b[i], static_cast<double>(static_cast<float>(a[i])));
}

TEST(DatasetJsonTest, RejectsMalformed) {
  EXPECT_THROW(ParseDataset("not json"), FormatError);
  EXPECT_THROW(ParseDataset("{\"images\": []}"), FormatError);
  EXPECT_THROW(ParseDataset(R"({"num_categories": 1, "images": [{"id": 0, "h": 2, "w": 2, "k": 1,
      "features": "AAAA", "labels": [], "gt": [], "proposals": [[0,0,1,1]]}]})"),
               FormatError);
}

TEST(ModelJsonTest, RoundTripIsBitExact) {
  testing::Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    MscModel m = testing::RandomModel(rng, testing::RandInt(rng, 1, 4), testing::RandInt(rng, 1, 4),
                                      testing::RandInt(rng, 1, 5), 10.0);
    m.head(0).cls_bias = std::numeric_limits<double>::denorm_min();
    const std::string text = SerializeModel(m);
    const MscModel back = ParseModel(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(SerializeModel(back), text);
  }
  EXPECT_THROW(ParseModel(R"({"pooled_size": 1, "channels": 1, "categories": {"0": {"cls_w": [1, 2], "cls_b": 0, "sal_w": [0]}}})"),
               FormatError);
}

TEST(PredictionsJsonTest, RoundTrip) {
  const std::vector<ScoredBox> preds{{0, 1, BoundingBox(1, 2, 3, 4), 0.25}, {3, 0, BoundingBox(0, 0, 9, 9), 1e-300}};
  const auto back = ParsePredictions(SerializePredictions(preds));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].box, preds[1].box);
  EXPECT_EQ(back[1].score, preds[1].score);
  EXPECT_EQ(back[0].image_id, 0);
  EXPECT_EQ(back[0].category, 1);
}

TEST(MetricsCsvTest, HeaderRowsAndNan) {
  const std::vector<RoundMetrics> rounds{{0, 3, 50.0, 40.0, 0.25}, {1, 4, std::nan(""), 45.5, std::nan("")}};
  const std::string csv = MetricsCsv(rounds);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "round,n_selected,corloc_selected,corloc_all,mean_S");
  EXPECT_NE(csv.find("\n0,3,50,40,0.25\n"), std::string::npos);
  EXPECT_NE(csv.find("\n1,4,nan,45.5,nan\n"), std::string::npos);
}

TEST(PgmTest, EncodeDecode) {
  const std::vector<unsigned char> gray{0, 1, 2, 255, 128, 7};
  const std::string pgm = EncodePgm(3, 2, gray);
  EXPECT_EQ(pgm.substr(0, 11), "P5\n3 2\n255\n");
  const PgmImage img = DecodePgm(pgm);
  EXPECT_EQ(img.width, 3);
  EXPECT_EQ(img.height, 2);
  EXPECT_EQ(img.gray, gray);
  EXPECT_THROW(DecodePgm("P2\n1 1\n255\n0"), FormatError);
  EXPECT_THROW(DecodePgm("P5\n2 2\n255\nab"), FormatError);
}

TEST(GrayTest, Conversions) {
  Plane p(1, 4);
  p.at(0, 0) = -0.2;
  p.at(0, 1) = 0.5;
  p.at(0, 2) = 0.998;
  p.at(0, 3) = 1.7;
  EXPECT_EQ(PlaneToGray(p), (std::vector<unsigned char>{0, 128, 254, 255}));
  LabeledMask m(3, 1);
  m.at(0, 0) = kBackground;
  m.at(1, 0) = 2;
  EXPECT_EQ(MaskToGray(m), (std::vector<unsigned char>{0, 3, 255}));
  SeedMask s(2, 1);
  s.Set(1, 0, kBackground, SeedSource::kBackground);
  EXPECT_EQ(SeedsToGray(s, kBackground), (std::vector<unsigned char>{0, 255}));
}

}  // namespace
}  // namespace micl
