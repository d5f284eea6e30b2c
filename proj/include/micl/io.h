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

// File formats.
//
// Dataset JSON:
//   {"num_categories": C,
//    "images": [{"id", "h", "w", "k",
//                "features": base64 of little-endian float32, row-major (y, x, k),
//                "labels": [c...],
//                "gt": [{"c", "box": [x_min, y_min, x_max, y_max], "part": [...]}],
//                "proposals": [[x_min, y_min, x_max, y_max], ...]}]}
// Model JSON:
//   {"pooled_size": P, "channels": K,
//    "categories": {"<c>": {"cls_w": [...], "cls_b": b, "sal_w": [...]}}}
// Predictions JSON:
//   {"predictions": [{"image", "c", "box": [...], "score"}]}
// PGM: binary P5, maxval 255.

#ifndef MICL_IO_H_
#define MICL_IO_H_

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "micl/curriculum.h"
#include "micl/detector.h"
#include "micl/evaluation.h"
#include "micl/feature_grid.h"
#include "micl/seeding.h"
#include "micl/synthdata.h"

namespace micl {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string Base64Encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> Base64Decode(std::string_view text);

std::string SerializeDataset(const Dataset& dataset);
Dataset ParseDataset(std::string_view text);

std::string SerializeModel(const MscModel& model);
MscModel ParseModel(std::string_view text);

std::string SerializePredictions(std::span<const ScoredBox> predictions);
std::vector<ScoredBox> ParsePredictions(std::string_view text);

std::string SerializeState(const CurriculumState& state);

// Header "round,n_selected,corloc_selected,corloc_all,mean_S" plus one row
// per round; NaN cells are written as "nan".
std::string MetricsCsv(std::span<const RoundMetrics> rounds);

// Gray level round(255 * v) of a [0, 1] plane (values are clamped first).
std::vector<unsigned char> PlaneToGray(const Plane& plane);
// kBackground -> 0, category c -> c + 1, kUnlabeled -> 255.
std::vector<unsigned char> MaskToGray(const LabeledMask& mask);
// 255 where the seed mask carries `label`, 0 elsewhere.
std::vector<unsigned char> SeedsToGray(const SeedMask& seeds, int label);

std::string EncodePgm(int width, int height, std::span<const unsigned char> gray);

struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> gray;
};
PgmImage DecodePgm(std::string_view bytes);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace micl

#endif  // MICL_IO_H_
