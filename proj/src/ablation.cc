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

#include "micl/ablation.h"

#include <vector>

namespace micl {

namespace {

// Re-trains once with every record labeled by `field`, then measures the
// new detector's CorLoc.
double SingleShot(std::span<const PreparedImage> images, int num_categories,
                  const CurriculumState& round0, MaybeBox ExampleRecord::*field,
                  const MiclConfig& config) {
  std::vector<ExampleRecord> records = round0.records;
  for (ExampleRecord& r : records) {
    r.selected = true;
    r.pseudo_box = r.*field;
  }
  TrainOptions opts = config.retraining;
  opts.seed = RetrainingSeed(config.seed);
  const MscModel model = RetrainOnRecords(images, num_categories, records, opts);
  const std::vector<Detection> dets = DetectAll(images, model, records);
  std::vector<Prediction> preds;
  for (size_t i = 0; i < records.size(); ++i) {
    preds.push_back({records[i].image_id, records[i].category, dets[i].box});
  }
  return Corloc(preds, GroundTruthOf(images));
}

std::vector<Prediction> RoundZero(const CurriculumState& s,
                                  std::span<const PreparedImage> images,
                                  MaybeBox ExampleRecord::*field) {
  return PredictionsFrom(s.records, images, field);
}

}  // namespace

AblationReport RunAblation(std::span<const PreparedImage> images, int num_categories,
                           const MiclConfig& config) {
  const InitialRound initial = RunInitialRound(images, num_categories, config);
  const auto gt = GroundTruthOf(images);

  AblationReport report;
  report.num_examples = static_cast<int>(initial.state.records.size());
  report.msc_label_corloc = CorlocOf(initial.state.records, images, &ExampleRecord::det);
  report.ssg_label_corloc = CorlocOf(initial.state.records, images, &ExampleRecord::ssg);
  report.msc_errors = BuildErrorHistogram(RoundZero(initial.state, images, &ExampleRecord::det), gt);
  report.ssg_errors = BuildErrorHistogram(RoundZero(initial.state, images, &ExampleRecord::ssg), gt);

  report.msc_final = SingleShot(images, num_categories, initial.state, &ExampleRecord::det, config);
  report.ssg_final = SingleShot(images, num_categories, initial.state, &ExampleRecord::ssg, config);

  MiclConfig mil = config;
  mil.policy = SelectionPolicy::kRandom;
  report.mil_final = MiclRunFrom(images, num_categories, mil, initial).final_corloc;

  MiclConfig micl = config;
  micl.policy = SelectionPolicy::kConsistency;
  report.micl = MiclRunFrom(images, num_categories, micl, initial);
  report.micl_final = report.micl.final_corloc;
  const CurriculumState& selected0 = report.micl.history.front();
  report.subset_size = selected0.NumSelected();
  report.subset_label_corloc =
      CorlocOf(selected0.records, images, &ExampleRecord::pseudo_box, true);
  return report;
}

}  // namespace micl
