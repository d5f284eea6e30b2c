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

#include "micl/detector.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "micl/kernels.h"

namespace micl {

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void Axpy(double alpha, std::span<const double> x, std::vector<double>& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void CheckCategory(const MscModel& model, int category) {
  if (category < 0 || category >= model.num_categories()) {
    throw std::out_of_range("unknown category " + std::to_string(category));
  }
}

void CheckRois(std::span<const Roi> rois, const MscModel& model) {
  if (rois.empty()) throw std::invalid_argument("empty RoI list");
  for (const Roi& r : rois) {
    if (static_cast<int>(r.pooled.values().size()) != model.feature_size()) {
      throw DimensionError("pooled RoI size does not match the model");
    }
  }
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

void FillGaussian(std::vector<double>& v, std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& x : v) x = dist(rng);
}

MscModel RandomModel(int num_categories, int pooled_size, int channels,
                     const TrainOptions& options, bool init_saliency) {
  MscModel model(num_categories, pooled_size, channels);
  std::mt19937_64 rng(options.seed);
  for (int c = 0; c < num_categories; ++c) {
    FillGaussian(model.head(c).cls_weights, rng, options.init_scale);
    if (init_saliency) FillGaussian(model.head(c).sal_weights, rng, options.init_scale);
  }
  return model;
}

void ApplyUpdate(MscModel& model, const ModelGradient& grad, double lr) {
  for (int c = 0; c < model.num_categories(); ++c) {
    CategoryHead& h = model.head(c);
    const CategoryHead& g = grad.head(c);
    for (size_t i = 0; i < h.cls_weights.size(); ++i) h.cls_weights[i] -= lr * g.cls_weights[i];
    h.cls_bias -= lr * g.cls_bias;
    for (size_t i = 0; i < h.sal_weights.size(); ++i) h.sal_weights[i] -= lr * g.sal_weights[i];
  }
}

template <typename LossFn>
TrainResult Descend(MscModel model, const TrainOptions& options, LossFn&& loss_fn) {
  TrainResult result;
  ModelGradient grad(model.num_categories(), model.pooled_size(), model.channels());
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    grad = ModelGradient(model.num_categories(), model.pooled_size(), model.channels());
    const double loss = loss_fn(model, &grad);
    if (!std::isfinite(loss)) {
      throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) +
                             " (loss " + std::to_string(loss) + ")");
    }
    result.loss_history.push_back(loss);
    ApplyUpdate(model, grad, options.learning_rate);
    if (!model.AllFinite()) {
      throw TrainingDiverged("non-finite weights after epoch " + std::to_string(epoch));
    }
  }
  const double final_loss = loss_fn(model, nullptr);
  if (!std::isfinite(final_loss)) throw TrainingDiverged("non-finite final loss");
  result.loss_history.push_back(final_loss);
  result.model = std::move(model);
  return result;
}

}  // namespace

FeatureGrid RoiPool(const FeatureGrid& image, const BoundingBox& box, int pooled_size) {
  return kernels::parallel::RoiMaxPool(image, box, pooled_size).pooled;
}

Roi MakeRoi(const FeatureGrid& image, const BoundingBox& box, int pooled_size) {
  auto pooled = kernels::serial::RoiMaxPool(image, box, pooled_size);
  return Roi{box, std::move(pooled.pooled), std::move(pooled.argmax)};
}

std::vector<Roi> MakeRois(const FeatureGrid& image, std::span<const BoundingBox> boxes,
                          int pooled_size) {
  std::vector<Roi> rois;
  rois.reserve(boxes.size());
  for (const BoundingBox& b : boxes) rois.push_back(MakeRoi(image, b, pooled_size));
  return rois;
}

MscModel::MscModel(int num_categories, int pooled_size, int channels)
    : pooled_size_(pooled_size), channels_(channels) {
  if (num_categories < 1 || pooled_size < 1 || channels < 1) {
    throw std::invalid_argument("MscModel: dimensions must be >= 1");
  }
  const size_t d = static_cast<size_t>(feature_size());
  heads_.assign(num_categories, CategoryHead{std::vector<double>(d, 0.0), 0.0,
                                             std::vector<double>(d, 0.0)});
}

double MscModel::ClassLogit(int category, std::span<const double> pooled) const {
  const CategoryHead& h = heads_.at(category);
  return Dot(h.cls_weights, pooled) + h.cls_bias;
}

double MscModel::Probability(int category, std::span<const double> pooled) const {
  return Sigmoid(ClassLogit(category, pooled));
}

double MscModel::SaliencyLogit(int category, std::span<const double> pooled) const {
  return Dot(heads_.at(category).sal_weights, pooled);
}

bool MscModel::AllFinite() const {
  for (const CategoryHead& h : heads_) {
    if (!std::isfinite(h.cls_bias)) return false;
    for (double v : h.cls_weights) if (!std::isfinite(v)) return false;
    for (double v : h.sal_weights) if (!std::isfinite(v)) return false;
  }
  return true;
}

RoiScores ScoreRois(std::span<const Roi> rois, const MscModel& model, int category) {
  CheckCategory(model, category);
  CheckRois(rois, model);
  RoiScores scores;
  std::vector<double> logits;
  scores.probability.reserve(rois.size());
  logits.reserve(rois.size());
  for (const Roi& r : rois) {
    scores.probability.push_back(model.Probability(category, r.pooled.values()));
    logits.push_back(model.SaliencyLogit(category, r.pooled.values()));
  }
  scores.saliency = Softmax(logits);
  return scores;
}

double ImageScore(std::span<const Roi> rois, const MscModel& model, int category) {
  const RoiScores s = ScoreRois(rois, model, category);
  double p = 0.0;
  for (size_t r = 0; r < rois.size(); ++r) p += s.saliency[r] * s.probability[r];
  return p;
}

double MultilabelCeLoss(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("MultilabelCeLoss: size mismatch");
  }
  double loss = 0.0;
  for (size_t c = 0; c < scores.size(); ++c) {
    const double p = std::clamp(scores[c], kProbabilityClamp, 1.0 - kProbabilityClamp);
    loss -= labels[c] ? std::log(p) : std::log(1.0 - p);
  }
  return loss / static_cast<double>(scores.size());
}

std::vector<double> MultilabelCeLossGradient(std::span<const double> scores,
                                             std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("MultilabelCeLossGradient: size mismatch");
  }
  const double n = static_cast<double>(scores.size());
  std::vector<double> grad(scores.size(), 0.0);
  for (size_t c = 0; c < scores.size(); ++c) {
    const double p = scores[c];
    if (p < kProbabilityClamp || p > 1.0 - kProbabilityClamp) continue;
    grad[c] = (labels[c] ? -1.0 / p : 1.0 / (1.0 - p)) / n;
  }
  return grad;
}

Detection TopDetection(std::span<const Roi> rois, const MscModel& model, int category) {
  const RoiScores s = ScoreRois(rois, model, category);
  int best = 0;
  double best_score = s.saliency[0] * s.probability[0];
  for (size_t r = 1; r < rois.size(); ++r) {
    const double v = s.saliency[r] * s.probability[r];
    if (v > best_score) {
      best_score = v;
      best = static_cast<int>(r);
    }
  }
  return Detection{rois[best].box, category, best_score, best};
}

std::vector<FeatureGrid> FeatureGradients(std::span<const Roi> rois,
                                          const MscModel& model, int category) {
  CheckCategory(model, category);
  const auto& w = model.head(category).cls_weights;
  std::vector<FeatureGrid> out;
  out.reserve(rois.size());
  for (const Roi& r : rois) {
    const double p = model.Probability(category, r.pooled.values());
    const double scale = p * (1.0 - p);
    FeatureGrid g(r.pooled.height(), r.pooled.width(), r.pooled.channels());
    auto gv = g.values();
    for (size_t i = 0; i < gv.size(); ++i) gv[i] = scale * w[i];
    out.push_back(std::move(g));
  }
  return out;
}

FeatureGrid ImageFeatureGradient(std::span<const Roi> rois, const MscModel& model,
                                 int category, int height, int width) {
  const RoiScores s = ScoreRois(rois, model, category);
  double image_p = 0.0;
  for (size_t r = 0; r < rois.size(); ++r) image_p += s.saliency[r] * s.probability[r];

  const CategoryHead& head = model.head(category);
  const int k_count = model.channels();
  FeatureGrid out(height, width, k_count);
  auto ov = out.values();
  for (size_t r = 0; r < rois.size(); ++r) {
    const double h = s.saliency[r];
    const double p = s.probability[r];
    const double cls_coef = h * p * (1.0 - p);
    const double sal_coef = h * (p - image_p);
    const auto& argmax = rois[r].argmax;
    for (size_t j = 0; j < argmax.size(); ++j) {
      const int k = static_cast<int>(j % k_count);
      const size_t dst = static_cast<size_t>(argmax[j]) * k_count + k;
      ov[dst] += cls_coef * head.cls_weights[j] + sal_coef * head.sal_weights[j];
    }
  }
  return out;
}

double ImageLevelLoss(const MscModel& model, std::span<const TrainingImage> images,
                      ModelGradient* gradient) {
  if (images.empty()) throw std::invalid_argument("ImageLevelLoss: empty batch");
  const int num_c = model.num_categories();
  const double norm = static_cast<double>(images.size()) * num_c;
  double total = 0.0;
  std::vector<double> p, logits;
  for (const TrainingImage& img : images) {
    const auto& rois = *img.rois;
    CheckRois(rois, model);
    if (static_cast<int>(img.labels.size()) != num_c) {
      throw std::invalid_argument("ImageLevelLoss: label vector size mismatch");
    }
    for (int c = 0; c < num_c; ++c) {
      const CategoryHead& head = model.head(c);
      p.resize(rois.size());
      logits.resize(rois.size());
      for (size_t r = 0; r < rois.size(); ++r) {
        const auto x = rois[r].pooled.values();
        p[r] = Sigmoid(Dot(head.cls_weights, x) + head.cls_bias);
        logits[r] = Dot(head.sal_weights, x);
      }
      const std::vector<double> h = Softmax(logits);
      double image_p = 0.0;
      for (size_t r = 0; r < rois.size(); ++r) image_p += h[r] * p[r];

      const int y = img.labels[c];
      const double pc = std::clamp(image_p, kProbabilityClamp, 1.0 - kProbabilityClamp);
      total -= y ? std::log(pc) : std::log(1.0 - pc);

      if (gradient == nullptr) continue;
      if (image_p < kProbabilityClamp || image_p > 1.0 - kProbabilityClamp) continue;
      const double dl_dp = (y ? -1.0 / image_p : 1.0 / (1.0 - image_p)) / norm;
      CategoryHead& g = gradient->head(c);
      for (size_t r = 0; r < rois.size(); ++r) {
        const auto x = rois[r].pooled.values();
        const double cls_coef = dl_dp * h[r] * p[r] * (1.0 - p[r]);
        Axpy(cls_coef, x, g.cls_weights);
        g.cls_bias += cls_coef;
        Axpy(dl_dp * h[r] * (p[r] - image_p), x, g.sal_weights);
      }
    }
  }
  return total / norm;
}

TrainResult TrainMsc(std::span<const TrainingImage> images, int num_categories,
                     int pooled_size, int channels, const TrainOptions& options) {
  if (images.empty()) throw std::invalid_argument("TrainMsc: empty dataset");
  MscModel init = RandomModel(num_categories, pooled_size, channels, options, true);
  return Descend(std::move(init), options,
                 [&](const MscModel& m, ModelGradient* g) {
                   return ImageLevelLoss(m, images, g);
                 });
}

namespace {

struct BoxSample {
  const double* features;
  int category;
  int target;
  double weight;
};

std::vector<BoxSample> BuildBoxSamples(const MscModel& model,
                                       std::span<const BoxTrainingImage> images) {
  const int num_c = model.num_categories();
  std::vector<std::vector<BoxSample>> pos(num_c), neg(num_c);
  for (const BoxTrainingImage& img : images) {
    const auto& rois = *img.rois;
    CheckRois(rois, model);
    for (int c = 0; c < num_c; ++c) {
      const bool present = c < static_cast<int>(img.labels.size()) && img.labels[c];
      const auto it = img.pseudo_boxes.find(c);
      if (present && it == img.pseudo_boxes.end()) continue;
      for (const Roi& r : rois) {
        const double* x = r.pooled.values().data();
        if (!present) {
          neg[c].push_back({x, c, 0, 0.0});
          continue;
        }
        const double iou = Iou(r.box, it->second);
        if (iou >= kPositiveIou) {
          pos[c].push_back({x, c, 1, 0.0});
        } else if (iou < kNegativeIou) {
          neg[c].push_back({x, c, 0, 0.0});
        }
      }
    }
  }
  std::vector<BoxSample> samples;
  int active = 0;
  for (int c = 0; c < num_c; ++c) active += (!pos[c].empty() || !neg[c].empty());
  for (int c = 0; c < num_c; ++c) {
    const bool both = !pos[c].empty() && !neg[c].empty();
    const double side = both ? 0.5 : 1.0;
    for (auto* group : {&pos[c], &neg[c]}) {
      for (BoxSample s : *group) {
        s.weight = side / static_cast<double>(group->size()) / active;
        samples.push_back(s);
      }
    }
  }
  return samples;
}

double BoxLoss(const MscModel& model, std::span<const BoxSample> samples,
               ModelGradient* gradient) {
  const size_t d = static_cast<size_t>(model.feature_size());
  double total = 0.0;
  for (const BoxSample& s : samples) {
    const CategoryHead& head = model.head(s.category);
    const std::span<const double> x(s.features, d);
    const double z = Dot(head.cls_weights, x) + head.cls_bias;
    total += s.weight * (s.target ? Softplus(-z) : Softplus(z));
    if (gradient == nullptr) continue;
    const double coef = s.weight * (Sigmoid(z) - s.target);
    CategoryHead& g = gradient->head(s.category);
    Axpy(coef, x, g.cls_weights);
    g.cls_bias += coef;
  }
  return total;
}

}  // namespace

double BoxLevelLoss(const MscModel& model, std::span<const BoxTrainingImage> images,
                    ModelGradient* gradient) {
  const auto samples = BuildBoxSamples(model, images);
  return BoxLoss(model, samples, gradient);
}

TrainResult TrainOnBoxes(std::span<const BoxTrainingImage> images, int num_categories,
                         int pooled_size, int channels, const TrainOptions& options) {
  if (images.empty()) throw std::invalid_argument("TrainOnBoxes: empty dataset");
  MscModel init = RandomModel(num_categories, pooled_size, channels, options, false);
  const auto samples = BuildBoxSamples(init, images);
  if (samples.empty()) throw std::invalid_argument("TrainOnBoxes: no labeled RoIs");
  return Descend(std::move(init), options,
                 [&](const MscModel& m, ModelGradient* g) {
                   return BoxLoss(m, samples, g);
                 });
}

}  // namespace micl
