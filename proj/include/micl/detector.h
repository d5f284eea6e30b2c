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

// Most-salient-candidate detector: a classification branch p(c; r) and a
// saliency branch h(c; r) over RoI-pooled features. Image-level scores are
// p(c) = sum_r h(c; r) p(c; r) with h softmax-normalized over the RoIs of an
// image, which lets the detector train from image labels alone.

#ifndef MICL_DETECTOR_H_
#define MICL_DETECTOR_H_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "micl/feature_grid.h"
#include "micl/geometry.h"

namespace micl {

inline constexpr int kDefaultPooledSize = 4;
inline constexpr double kProbabilityClamp = 1e-7;

struct Roi {
  BoundingBox box;
  FeatureGrid pooled;       // P x P x K
  std::vector<int> argmax;  // image pixel (y * W + x) behind each pooled value
};

// Max pooling of `box` into a P x P grid.
FeatureGrid RoiPool(const FeatureGrid& image, const BoundingBox& box,
                    int pooled_size = kDefaultPooledSize);
Roi MakeRoi(const FeatureGrid& image, const BoundingBox& box,
            int pooled_size = kDefaultPooledSize);
std::vector<Roi> MakeRois(const FeatureGrid& image,
                          std::span<const BoundingBox> boxes,
                          int pooled_size = kDefaultPooledSize);

// Weights of one category. Both branches read the flattened pooled grid.
struct CategoryHead {
  std::vector<double> cls_weights;
  double cls_bias = 0.0;
  std::vector<double> sal_weights;  // softmax over RoIs ignores a bias

  bool operator==(const CategoryHead&) const = default;
};

class MscModel {
 public:
  MscModel() = default;
  // All-zero weights.
  MscModel(int num_categories, int pooled_size, int channels);

  int num_categories() const { return static_cast<int>(heads_.size()); }
  int pooled_size() const { return pooled_size_; }
  int channels() const { return channels_; }
  int feature_size() const { return pooled_size_ * pooled_size_ * channels_; }

  const CategoryHead& head(int category) const { return heads_.at(category); }
  CategoryHead& head(int category) { return heads_.at(category); }

  double ClassLogit(int category, std::span<const double> pooled) const;
  double Probability(int category, std::span<const double> pooled) const;
  double SaliencyLogit(int category, std::span<const double> pooled) const;

  bool AllFinite() const;
  bool operator==(const MscModel&) const = default;

 private:
  int pooled_size_ = 0;
  int channels_ = 0;
  std::vector<CategoryHead> heads_;
};

// Per-RoI p(c; r) and h(c; r) for one category.
struct RoiScores {
  std::vector<double> probability;
  std::vector<double> saliency;
};

RoiScores ScoreRois(std::span<const Roi> rois, const MscModel& model, int category);

// p(c) = sum_r h(c; r) p(c; r).
double ImageScore(std::span<const Roi> rois, const MscModel& model, int category);

// Mean over categories of the binary cross entropy, probabilities clamped to
// [1e-7, 1 - 1e-7]. `labels[c]` is 1 for existing categories.
double MultilabelCeLoss(std::span<const double> scores, std::span<const int> labels);
// d loss / d scores. Zero where the clamp is active.
std::vector<double> MultilabelCeLossGradient(std::span<const double> scores,
                                             std::span<const int> labels);

struct Detection {
  BoundingBox box;
  int category;
  double score;  // h(c; r) p(c; r)
  int roi_index;
};

// Argmax of h(c; r) p(c; r); ties go to the lowest RoI index.
Detection TopDetection(std::span<const Roi> rois, const MscModel& model, int category);

// d p(c; r) / d pooled features of every RoI, shaped like the pooled grid.
std::vector<FeatureGrid> FeatureGradients(std::span<const Roi> rois,
                                          const MscModel& model, int category);

// d p(c) / d image features. Pooled-level gradients are routed back to the
// max-pool source pixels and summed over RoIs.
FeatureGrid ImageFeatureGradient(std::span<const Roi> rois, const MscModel& model,
                                 int category, int height, int width);

// One image as the trainer sees it.
struct TrainingImage {
  const std::vector<Roi>* rois;
  std::vector<int> labels;  // [category] -> 0/1
};

// Gradient buffer with the model's layout.
using ModelGradient = MscModel;

// Mean image-level loss over the batch; writes the exact gradient when
// `gradient` is non-null.
double ImageLevelLoss(const MscModel& model, std::span<const TrainingImage> images,
                      ModelGradient* gradient);

struct TrainOptions {
  int epochs = 300;
  double learning_rate = 0.1;
  uint64_t seed = 0;
  double init_scale = 0.01;  // stddev of the initial weights
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainResult {
  MscModel model;
  std::vector<double> loss_history;  // loss before each update, then final
};

// Full-batch gradient descent on the image-level multi-label loss, starting
// from seeded Gaussian weights.
TrainResult TrainMsc(std::span<const TrainingImage> images, int num_categories,
                     int pooled_size, int channels, const TrainOptions& options);

// Box-level supervision for re-training. For category c of one image:
// a pseudo box makes RoIs with IoU >= 0.5 positive and IoU < 0.3 negative;
// a category absent from `labels` makes every RoI negative; a present
// category without a pseudo box contributes nothing.
struct BoxTrainingImage {
  const std::vector<Roi>* rois;
  std::vector<int> labels;
  std::map<int, BoundingBox> pseudo_boxes;
};

inline constexpr double kPositiveIou = 0.5;
inline constexpr double kNegativeIou = 0.3;

// Class-balanced RoI-level binary cross entropy (positives and negatives of
// each category weighted 1/2 each). Saliency weights are not touched.
double BoxLevelLoss(const MscModel& model, std::span<const BoxTrainingImage> images,
                    ModelGradient* gradient);

// Fresh seeded initialization, then full-batch descent on BoxLevelLoss. The
// saliency branch is left at zero, so h is uniform and detections rank by
// p(c; r) alone.
TrainResult TrainOnBoxes(std::span<const BoxTrainingImage> images, int num_categories,
                         int pooled_size, int channels, const TrainOptions& options);

}  // namespace micl

#endif  // MICL_DETECTOR_H_
