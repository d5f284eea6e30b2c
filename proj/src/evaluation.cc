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

#include "micl/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace micl {

namespace {

using GtIndex = std::map<std::pair<int, int>, std::vector<BoundingBox>>;

GtIndex IndexGroundTruth(std::span<const GroundTruthObject> ground_truth) {
  GtIndex index;
  for (const auto& g : ground_truth) index[{g.image_id, g.category}].push_back(g.box);
  return index;
}

}  // namespace

double Corloc(std::span<const Prediction> predictions,
              std::span<const GroundTruthObject> ground_truth) {
  if (predictions.empty()) return 0.0;
  const GtIndex index = IndexGroundTruth(ground_truth);
  int hits = 0;
  for (const Prediction& p : predictions) {
    const auto it = index.find({p.image_id, p.category});
    if (it == index.end()) {
      throw EvaluationConfigError("prediction for category " + std::to_string(p.category) +
                                  " absent from image " + std::to_string(p.image_id));
    }
    if (!p.box) continue;
    for (const BoundingBox& g : it->second) {
      if (Iou(*p.box, g) >= kMatchIou) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * hits / static_cast<double>(predictions.size());
}

double AveragePrecision(std::span<const ScoredBox> detections,
                        std::span<const GroundTruthObject> ground_truth,
                        int category, ApVariant variant) {
  std::map<int, std::vector<BoundingBox>> gt;
  int64_t npos = 0;
  for (const auto& g : ground_truth) {
    if (g.category != category) continue;
    gt[g.image_id].push_back(g.box);
    ++npos;
  }
  if (npos == 0) return std::numeric_limits<double>::quiet_NaN();

  std::vector<size_t> order;
  for (size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].category == category) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (detections[a].score != detections[b].score) {
      return detections[a].score > detections[b].score;
    }
    return detections[a].image_id < detections[b].image_id;
  });

  std::map<int, std::vector<char>> matched;
  for (const auto& [id, boxes] : gt) matched[id].assign(boxes.size(), 0);

  std::vector<int64_t> tp_cum, fp_cum;
  int64_t tp = 0, fp = 0;
  for (size_t i : order) {
    const ScoredBox& d = detections[i];
    int best = -1;
    double best_iou = 0.0;
    const auto it = gt.find(d.image_id);
    if (it != gt.end()) {
      for (size_t g = 0; g < it->second.size(); ++g) {
        if (matched[d.image_id][g]) continue;
        const double iou = Iou(d.box, it->second[g]);
        if (iou >= kMatchIou && iou > best_iou) {
          best_iou = iou;
          best = static_cast<int>(g);
        }
      }
    }
    if (best >= 0) {
      matched[d.image_id][best] = 1;
      ++tp;
    } else {
      ++fp;
    }
    tp_cum.push_back(tp);
    fp_cum.push_back(fp);
  }

  const size_t n = tp_cum.size();
  auto precision = [&](size_t k) {
    return static_cast<double>(tp_cum[k]) / static_cast<double>(tp_cum[k] + fp_cum[k]);
  };

  if (variant == ApVariant::kVoc07) {
    double ap = 0.0;
    for (int t = 0; t <= 10; ++t) {
      double best = 0.0;
      // recall >= t/10, compared in integers.
      for (size_t k = 0; k < n; ++k) {
        if (tp_cum[k] * 10 >= t * npos) best = std::max(best, precision(k));
      }
      ap += best;
    }
    return ap / 11.0;
  }

  // Area under the monotone precision envelope.
  std::vector<double> mrec{0.0}, mpre{0.0};
  for (size_t k = 0; k < n; ++k) {
    mrec.push_back(static_cast<double>(tp_cum[k]) / static_cast<double>(npos));
    mpre.push_back(precision(k));
  }
  mrec.push_back(1.0);
  mpre.push_back(0.0);
  for (size_t i = mpre.size() - 1; i > 0; --i) mpre[i - 1] = std::max(mpre[i - 1], mpre[i]);
  double ap = 0.0;
  for (size_t i = 1; i < mrec.size(); ++i) {
    if (mrec[i] != mrec[i - 1]) ap += (mrec[i] - mrec[i - 1]) * mpre[i];
  }
  return ap;
}

double MeanAveragePrecision(std::span<const double> aps) {
  double sum = 0.0;
  int n = 0;
  for (double v : aps) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

std::string_view ErrorTypeName(ErrorType type) {
  switch (type) {
    case ErrorType::kCorrect: return "correct";
    case ErrorType::kTooLarge: return "too_large";
    case ErrorType::kTooSmall: return "too_small";
    case ErrorType::kOther: return "other";
  }
  return "unknown";
}

ErrorType ClassifyError(const BoundingBox& prediction,
                        std::span<const BoundingBox> same_category_gt) {
  if (same_category_gt.empty()) return ErrorType::kOther;
  size_t best = 0;
  double best_iou = -1.0;
  for (size_t i = 0; i < same_category_gt.size(); ++i) {
    const double iou = Iou(prediction, same_category_gt[i]);
    if (iou >= kMatchIou) return ErrorType::kCorrect;
    if (iou > best_iou) {
      best_iou = iou;
      best = i;
    }
  }
  const BoundingBox& g = same_category_gt[best];
  const double inter = static_cast<double>(IntersectionArea(prediction, g));
  const double pred_area = static_cast<double>(prediction.area());
  const double gt_area = static_cast<double>(g.area());
  if (inter >= kContainmentFraction * gt_area && pred_area > gt_area) {
    return ErrorType::kTooLarge;
  }
  if (inter >= kContainmentFraction * pred_area && pred_area < gt_area) {
    return ErrorType::kTooSmall;
  }
  return ErrorType::kOther;
}

ErrorType ErrorHistogram::ModalError() const {
  ErrorType best = ErrorType::kTooLarge;
  for (ErrorType t : {ErrorType::kTooLarge, ErrorType::kTooSmall, ErrorType::kOther}) {
    if (Count(t) > Count(best)) best = t;
  }
  return best;
}

ErrorHistogram BuildErrorHistogram(std::span<const Prediction> predictions,
                                   std::span<const GroundTruthObject> ground_truth) {
  const GtIndex index = IndexGroundTruth(ground_truth);
  ErrorHistogram hist;
  for (const Prediction& p : predictions) {
    if (!p.box) continue;
    const auto it = index.find({p.image_id, p.category});
    const std::span<const BoundingBox> gt =
        it == index.end() ? std::span<const BoundingBox>{} : std::span(it->second);
    ++hist.counts[static_cast<int>(ClassifyError(*p.box, gt))];
  }
  return hist;
}

}  // namespace micl
