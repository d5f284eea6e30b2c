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

// Multiple instance curriculum learning. Every (image, existing category)
// pair is one example. Each round re-localizes it twice, once with the
// detector (top RoI) and once through segmentation seeded by the
// detector's saliency, and an example becomes easy when the two boxes
// agree: IoU(det, ssg) >= T. The detector is then re-trained on the fused
// boxes of the easy examples, and the set grows round by round.

#ifndef MICL_CURRICULUM_H_
#define MICL_CURRICULUM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "micl/detector.h"
#include "micl/evaluation.h"
#include "micl/geometry.h"
#include "micl/saliency.h"
#include "micl/seeding.h"
#include "micl/segmenter.h"
#include "micl/synthdata.h"

namespace micl {

inline constexpr double kDefaultConsistencyThreshold = 0.5;
inline constexpr int kDefaultMaxRounds = 5;

// A scene with its RoIs pooled once.
struct PreparedImage {
  const Scene* scene;
  std::vector<Roi> rois;
  std::vector<int> labels;  // [category] -> 0/1
};

std::vector<PreparedImage> PrepareDataset(const Dataset& dataset,
                                          int pooled_size = kDefaultPooledSize);

struct LocalizationConfig {
  double object_threshold = kDefaultObjectThreshold;
  double background_threshold = kDefaultBackgroundThreshold;
  double min_background_fraction = kDefaultMinBackgroundFraction;
};

// Everything the segmentation path produces for one image.
struct SsgOutput {
  SaliencyMap saliency;  // normalized
  SeedMask seeds;
  double background_threshold = 0.0;
  LabeledMask mask;
  std::map<int, MaybeBox> boxes;  // per existing category
};

// Normalized per-category saliency aggregated over the detector's RoIs
// plus the gradient background plane, for the existing categories.
SaliencyMap DetectorSaliency(const PreparedImage& image, const MscModel& model);
SaliencyMap DetectorSaliency(const PreparedImage& image, const MscModel& model,
                             std::span<const int> categories);

SsgOutput RunSegmentationPath(const PreparedImage& image, const MscModel& model,
                              const SegmenterBackend& segmenter,
                              const LocalizationConfig& config);

struct ExampleRecord {
  int image_index = 0;  // into the prepared dataset
  int image_id = 0;
  int category = 0;
  MaybeBox det;
  MaybeBox ssg;
  std::optional<double> consistency;
  bool selected = false;
  bool forced = false;
  int selected_round = -1;
  double consistency_at_selection = 0.0;
  MaybeBox pseudo_box;

  bool operator==(const ExampleRecord&) const = default;
};

struct CurriculumState {
  int round = 0;
  double threshold = kDefaultConsistencyThreshold;
  int max_rounds = kDefaultMaxRounds;
  std::vector<ExampleRecord> records;

  int NumSelected() const;
  bool AllSelected() const;
  bool operator==(const CurriculumState&) const = default;
};

// One record per (image, existing category), no boxes yet.
CurriculumState InitialState(std::span<const PreparedImage> images, double threshold,
                             int max_rounds);

// IoU(det, ssg); nullopt unless both boxes exist.
std::optional<double> Consistency(const ExampleRecord& record);

// Selects records with S >= T. Selected records stay selected and get
// pseudo_box = fuse(det, ssg) refreshed whenever both boxes exist.
CurriculumState SelectEasy(CurriculumState state);

// Fresh det/ssg boxes and consistency for every record. Images run in
// parallel; a failure inside one image leaves its boxes empty.
CurriculumState Relocalize(CurriculumState state, const MscModel& model,
                           const SegmenterBackend& segmenter,
                           std::span<const PreparedImage> images,
                           const LocalizationConfig& config);

enum class SelectionPolicy {
  kConsistency,  // curriculum: S >= T
  kRandom,       // MIL baseline: random subset growing linearly with rounds
};

struct MiclConfig {
  double threshold = kDefaultConsistencyThreshold;
  int max_rounds = kDefaultMaxRounds;
  LocalizationConfig localization;
  RegionGrowConfig region_grow;
  TrainOptions init_training;
  TrainOptions retraining;
  uint64_t seed = 0;
  SelectionPolicy policy = SelectionPolicy::kConsistency;
};

struct RoundMetrics {
  int round = 0;
  int n_selected = 0;
  double corloc_selected = 0.0;  // pseudo boxes of selected records; NaN if none
  double corloc_all = 0.0;       // detector boxes of every record
  double mean_consistency = 0.0; // over defined S; NaN if none
};

// The round-0 product: image-label detector and its localizations.
struct InitialRound {
  MscModel model;
  CurriculumState state;  // relocalized; selection is left to the policy
};

struct MiclResult {
  MscModel model;
  CurriculumState state;
  std::vector<CurriculumState> history;  // state after each round's selection
  std::vector<RoundMetrics> rounds;
  int retrainings = 0;
  std::vector<Detection> final_detections;  // one per record
  double final_corloc = 0.0;
};

// Seeds derived for each training stage from the run seed.
uint64_t InitTrainingSeed(uint64_t seed);
uint64_t RetrainingSeed(uint64_t seed);
uint64_t SelectionSeed(uint64_t seed);

InitialRound RunInitialRound(std::span<const PreparedImage> images,
                             int num_categories, const MiclConfig& config);

// Full loop. Round 0 trains on image labels and selects; every later round
// re-trains from scratch on the selected pseudo boxes, re-localizes and
// selects again. Stops once every record is selected, or at max_rounds, where
// the rest are force-included with their detector box; a final re-training on
// the full set produces the returned model. max_rounds == 0 returns the
// image-label detector and the round-0 selection unchanged.
MiclResult MiclRun(std::span<const PreparedImage> images, int num_categories,
                   const MiclConfig& config);
MiclResult MiclRunFrom(std::span<const PreparedImage> images, int num_categories,
                       const MiclConfig& config, InitialRound initial);

// Trains the re-localization detector on the pseudo boxes of the selected
// records (or on `boxes` when given, one per record, nullopt = skip).
MscModel RetrainOnRecords(std::span<const PreparedImage> images, int num_categories,
                          std::span<const ExampleRecord> records,
                          const TrainOptions& options);

// Top detection per record under `model`.
std::vector<Detection> DetectAll(std::span<const PreparedImage> images,
                                 const MscModel& model,
                                 std::span<const ExampleRecord> records);

// CorLoc helpers over records.
std::vector<Prediction> PredictionsFrom(std::span<const ExampleRecord> records,
                                        std::span<const PreparedImage> images,
                                        MaybeBox ExampleRecord::*field,
                                        bool selected_only = false);
double CorlocOf(std::span<const ExampleRecord> records,
                std::span<const PreparedImage> images, MaybeBox ExampleRecord::*field,
                bool selected_only = false);
std::vector<GroundTruthObject> GroundTruthOf(std::span<const PreparedImage> images);

RoundMetrics ComputeRoundMetrics(const CurriculumState& state,
                                 std::span<const PreparedImage> images);

}  // namespace micl

#endif  // MICL_CURRICULUM_H_
