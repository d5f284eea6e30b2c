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

#include "micl/curriculum.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace micl {

namespace {

constexpr uint64_t kInitTrainingTag = 0x4d53432d494e4954ull;  // "MSC-INIT"
constexpr uint64_t kRetrainingTag = 0x5245545241494e53ull;    // "RETRAINS"
constexpr uint64_t kSelectionTag = 0x53454c4543542d52ull;     // "SELECT-R"

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<TrainingImage> ImageLabelBatch(std::span<const PreparedImage> images) {
  std::vector<TrainingImage> batch;
  batch.reserve(images.size());
  for (const PreparedImage& img : images) batch.push_back({&img.rois, img.labels});
  return batch;
}

std::set<int> ExistingSet(const PreparedImage& image) {
  return {image.scene->labels.begin(), image.scene->labels.end()};
}

void RefreshPseudoBox(ExampleRecord& r) {
  if (r.det && r.ssg) r.pseudo_box = FuseBoxes(*r.det, *r.ssg);
}

CurriculumState SelectRandom(CurriculumState state, uint64_t seed) {
  const int n = static_cast<int>(state.records.size());
  const int total_rounds = state.max_rounds + 1;
  const int target = std::min(
      n, static_cast<int>((static_cast<int64_t>(n) * (state.round + 1) + total_rounds - 1) /
                          total_rounds));
  std::vector<int> pool;
  for (int i = 0; i < n; ++i) {
    if (!state.records[i].selected) pool.push_back(i);
  }
  std::mt19937_64 rng(SplitMix64(SplitMix64(seed) + static_cast<uint64_t>(state.round)));
  std::shuffle(pool.begin(), pool.end(), rng);
  const int needed = std::max(0, target - state.NumSelected());
  for (int j = 0; j < needed && j < static_cast<int>(pool.size()); ++j) {
    ExampleRecord& r = state.records[pool[j]];
    r.selected = true;
    r.selected_round = state.round;
    r.consistency_at_selection = r.consistency.value_or(kNaN);
  }
  for (ExampleRecord& r : state.records) {
    if (!r.selected) continue;
    if (r.det && r.ssg) {
      r.pseudo_box = FuseBoxes(*r.det, *r.ssg);
    } else if (r.det) {
      r.pseudo_box = r.det;
    } else if (r.ssg) {
      r.pseudo_box = r.ssg;
    }
  }
  return state;
}

CurriculumState ApplyPolicy(CurriculumState state, const MiclConfig& config) {
  if (config.policy == SelectionPolicy::kRandom) {
    return SelectRandom(std::move(state), SelectionSeed(config.seed));
  }
  return SelectEasy(std::move(state));
}

}  // namespace

uint64_t InitTrainingSeed(uint64_t seed) { return seed ^ kInitTrainingTag; }
uint64_t RetrainingSeed(uint64_t seed) { return seed ^ kRetrainingTag; }
uint64_t SelectionSeed(uint64_t seed) { return seed ^ kSelectionTag; }

std::vector<PreparedImage> PrepareDataset(const Dataset& dataset, int pooled_size) {
  std::vector<PreparedImage> out(dataset.images.size());
  const int n = static_cast<int>(dataset.images.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const Scene& s = dataset.images[i];
    PreparedImage& p = out[i];
    p.scene = &s;
    p.rois = MakeRois(s.features, s.proposals, pooled_size);
    p.labels.assign(dataset.num_categories, 0);
    for (int c : s.labels) p.labels.at(c) = 1;
  }
  return out;
}

SaliencyMap DetectorSaliency(const PreparedImage& image, const MscModel& model) {
  return DetectorSaliency(image, model, image.scene->labels);
}

SaliencyMap DetectorSaliency(const PreparedImage& image, const MscModel& model,
                             std::span<const int> categories) {
  const Scene& scene = *image.scene;
  const int h = scene.features.height();
  const int w = scene.features.width();
  SaliencyMap out;
  std::map<int, FeatureGrid> image_grads;
  for (int c : categories) {
    const RoiScores scores = ScoreRois(image.rois, model, c);
    const std::vector<FeatureGrid> grads = FeatureGradients(image.rois, model, c);
    std::vector<ScoredRoiMap> maps;
    maps.reserve(image.rois.size());
    for (size_t r = 0; r < image.rois.size(); ++r) {
      maps.push_back({image.rois[r].box, RoiSaliency(image.rois[r].pooled, grads[r]),
                      scores.probability[r]});
    }
    out.objects.emplace(c, NormalizePlane(AggregateRoiSaliency(maps, h, w)));
    image_grads.emplace(c, ImageFeatureGradient(image.rois, model, c, h, w));
  }
  out.background = image_grads.empty() ? Plane(h, w, 1.0) : GradBackgroundMap(image_grads);
  out.normalized = true;
  return out;
}

SsgOutput RunSegmentationPath(const PreparedImage& image, const MscModel& model,
                              const SegmenterBackend& segmenter,
                              const LocalizationConfig& config) {
  const Scene& scene = *image.scene;
  SsgOutput out;
  out.saliency = DetectorSaliency(image, model);
  const int h = scene.features.height();
  const int w = scene.features.width();
  SeedMask object_seeds =
      out.saliency.objects.empty()
          ? SeedMask(w, h)
          : ThresholdObjectSeeds(out.saliency.objects, ExistingSet(image),
                                 config.object_threshold);
  BackgroundSeeds bg = AdaptiveBackgroundSeeds(
      out.saliency.background, config.background_threshold, config.min_background_fraction);
  out.background_threshold = bg.threshold;
  out.seeds = PoolSeeds(object_seeds, bg.seeds);
  out.mask = segmenter.Segment(scene.features, out.seeds);
  for (int c : scene.labels) out.boxes[c] = SsgBox(out.mask, c);
  return out;
}

int CurriculumState::NumSelected() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [](const ExampleRecord& r) { return r.selected; }));
}

bool CurriculumState::AllSelected() const {
  return std::all_of(records.begin(), records.end(),
                     [](const ExampleRecord& r) { return r.selected; });
}

CurriculumState InitialState(std::span<const PreparedImage> images, double threshold,
                             int max_rounds) {
  CurriculumState state;
  state.threshold = threshold;
  state.max_rounds = max_rounds;
  for (size_t i = 0; i < images.size(); ++i) {
    for (int c : images[i].scene->labels) {
      ExampleRecord r;
      r.image_index = static_cast<int>(i);
      r.image_id = images[i].scene->id;
      r.category = c;
      state.records.push_back(r);
    }
  }
  return state;
}

std::optional<double> Consistency(const ExampleRecord& record) {
  if (!record.det || !record.ssg) return std::nullopt;
  return Iou(*record.det, *record.ssg);
}

CurriculumState SelectEasy(CurriculumState state) {
  for (ExampleRecord& r : state.records) {
    r.consistency = Consistency(r);
    if (!r.selected && r.consistency && *r.consistency >= state.threshold) {
      r.selected = true;
      r.selected_round = state.round;
      r.consistency_at_selection = *r.consistency;
    }
    if (r.selected) RefreshPseudoBox(r);
  }
  return state;
}

CurriculumState Relocalize(CurriculumState state, const MscModel& model,
                           const SegmenterBackend& segmenter,
                           std::span<const PreparedImage> images,
                           const LocalizationConfig& config) {
  std::vector<std::vector<int>> by_image(images.size());
  for (size_t i = 0; i < state.records.size(); ++i) {
    by_image.at(state.records[i].image_index).push_back(static_cast<int>(i));
  }
  const int n = static_cast<int>(images.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    if (by_image[i].empty()) continue;
    std::map<int, MaybeBox> det, ssg;
    try {
      for (int idx : by_image[i]) {
        const int c = state.records[idx].category;
        det[c] = TopDetection(images[i].rois, model, c).box;
      }
      const SsgOutput out = RunSegmentationPath(images[i], model, segmenter, config);
      ssg = out.boxes;
    } catch (const std::exception&) {
      // Keep whatever succeeded; the rest of this image stays empty.
    }
    for (int idx : by_image[i]) {
      ExampleRecord& r = state.records[idx];
      r.det = det.contains(r.category) ? det[r.category] : std::nullopt;
      r.ssg = ssg.contains(r.category) ? ssg[r.category] : std::nullopt;
      r.consistency = Consistency(r);
    }
  }
  return state;
}

std::vector<GroundTruthObject> GroundTruthOf(std::span<const PreparedImage> images) {
  std::vector<GroundTruthObject> gt;
  for (const PreparedImage& img : images) {
    for (const SceneObject& o : img.scene->objects) {
      gt.push_back({img.scene->id, o.category, o.body});
    }
  }
  return gt;
}

std::vector<Prediction> PredictionsFrom(std::span<const ExampleRecord> records,
                                        std::span<const PreparedImage> images,
                                        MaybeBox ExampleRecord::*field,
                                        bool selected_only) {
  (void)images;
  std::vector<Prediction> preds;
  for (const ExampleRecord& r : records) {
    if (selected_only && !r.selected) continue;
    preds.push_back({r.image_id, r.category, r.*field});
  }
  return preds;
}

double CorlocOf(std::span<const ExampleRecord> records,
                std::span<const PreparedImage> images, MaybeBox ExampleRecord::*field,
                bool selected_only) {
  const auto preds = PredictionsFrom(records, images, field, selected_only);
  if (preds.empty()) return kNaN;
  return Corloc(preds, GroundTruthOf(images));
}

RoundMetrics ComputeRoundMetrics(const CurriculumState& state,
                                 std::span<const PreparedImage> images) {
  RoundMetrics m;
  m.round = state.round;
  m.n_selected = state.NumSelected();
  m.corloc_selected = CorlocOf(state.records, images, &ExampleRecord::pseudo_box, true);
  m.corloc_all = CorlocOf(state.records, images, &ExampleRecord::det);
  double sum = 0.0;
  int defined = 0;
  for (const ExampleRecord& r : state.records) {
    if (!r.consistency) continue;
    sum += *r.consistency;
    ++defined;
  }
  m.mean_consistency = defined == 0 ? kNaN : sum / defined;
  return m;
}

MscModel RetrainOnRecords(std::span<const PreparedImage> images, int num_categories,
                          std::span<const ExampleRecord> records,
                          const TrainOptions& options) {
  std::vector<BoxTrainingImage> batch;
  batch.reserve(images.size());
  for (const PreparedImage& img : images) batch.push_back({&img.rois, img.labels, {}});
  for (const ExampleRecord& r : records) {
    if (!r.selected || !r.pseudo_box) continue;
    batch.at(r.image_index).pseudo_boxes.insert_or_assign(r.category, *r.pseudo_box);
  }
  const int pooled = images.front().rois.front().pooled.height();
  const int channels = images.front().rois.front().pooled.channels();
  return TrainOnBoxes(batch, num_categories, pooled, channels, options).model;
}

std::vector<Detection> DetectAll(std::span<const PreparedImage> images,
                                 const MscModel& model,
                                 std::span<const ExampleRecord> records) {
  std::vector<std::optional<Detection>> out(records.size());
  const int n = static_cast<int>(records.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const ExampleRecord& r = records[i];
    out[i] = TopDetection(images[r.image_index].rois, model, r.category);
  }
  std::vector<Detection> dets;
  dets.reserve(out.size());
  for (auto& d : out) dets.push_back(*d);
  return dets;
}

InitialRound RunInitialRound(std::span<const PreparedImage> images, int num_categories,
                             const MiclConfig& config) {
  if (images.empty()) throw std::invalid_argument("MICL: empty dataset");
  const auto batch = ImageLabelBatch(images);
  TrainOptions opts = config.init_training;
  opts.seed = InitTrainingSeed(config.seed);
  const int pooled = images.front().rois.front().pooled.height();
  const int channels = images.front().rois.front().pooled.channels();
  InitialRound init;
  init.model = TrainMsc(batch, num_categories, pooled, channels, opts).model;
  const RegionGrowSegmenter segmenter(config.region_grow);
  init.state = Relocalize(InitialState(images, config.threshold, config.max_rounds),
                          init.model, segmenter, images, config.localization);
  return init;
}

MiclResult MiclRun(std::span<const PreparedImage> images, int num_categories,
                   const MiclConfig& config) {
  return MiclRunFrom(images, num_categories, config,
                     RunInitialRound(images, num_categories, config));
}

MiclResult MiclRunFrom(std::span<const PreparedImage> images, int num_categories,
                       const MiclConfig& config, InitialRound initial) {
  const RegionGrowSegmenter segmenter(config.region_grow);
  TrainOptions retrain = config.retraining;
  retrain.seed = RetrainingSeed(config.seed);

  MiclResult result;
  CurriculumState state = std::move(initial.state);
  state.round = 0;
  state.threshold = config.threshold;
  state.max_rounds = config.max_rounds;
  state = ApplyPolicy(std::move(state), config);
  result.history.push_back(state);
  result.rounds.push_back(ComputeRoundMetrics(state, images));
  MscModel model = std::move(initial.model);

  if (config.max_rounds > 0) {
    for (int n = 0;; ) {
      if (state.AllSelected()) break;
      if (n == config.max_rounds) {
        for (ExampleRecord& r : state.records) {
          if (r.selected) continue;
          r.selected = true;
          r.forced = true;
          r.selected_round = n;
          r.consistency_at_selection = r.consistency.value_or(kNaN);
          r.pseudo_box = r.det ? r.det : r.ssg;
        }
        break;
      }
      ++n;
      model = RetrainOnRecords(images, num_categories, state.records, retrain);
      ++result.retrainings;
      state.round = n;
      state = Relocalize(std::move(state), model, segmenter, images, config.localization);
      state = ApplyPolicy(std::move(state), config);
      result.history.push_back(state);
      result.rounds.push_back(ComputeRoundMetrics(state, images));
    }
    model = RetrainOnRecords(images, num_categories, state.records, retrain);
    ++result.retrainings;
  }

  result.final_detections = DetectAll(images, model, state.records);
  std::vector<Prediction> preds;
  for (size_t i = 0; i < state.records.size(); ++i) {
    preds.push_back({state.records[i].image_id, state.records[i].category,
                     result.final_detections[i].box});
  }
  result.final_corloc = preds.empty() ? kNaN : Corloc(preds, GroundTruthOf(images));
  result.model = std::move(model);
  result.state = std::move(state);
  return result;
}

}  // namespace micl
