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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace micl {

using nlohmann::json;

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int DecodeChar(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

json BoxToJson(const BoundingBox& b) {
  return json::array({b.x_min(), b.y_min(), b.x_max(), b.y_max()});
}

BoundingBox BoxFromJson(const json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("box must be [x_min,y_min,x_max,y_max]");
  return BoundingBox(j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>());
}

std::string FeaturesToBase64(const FeatureGrid& f) {
  std::vector<unsigned char> bytes(f.values().size() * 4);
  size_t o = 0;
  for (double v : f.values()) {
    uint32_t bits = std::bit_cast<uint32_t>(static_cast<float>(v));
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    std::memcpy(bytes.data() + o, &bits, 4);
    o += 4;
  }
  return Base64Encode(bytes);
}

FeatureGrid FeaturesFromBase64(std::string_view text, int h, int w, int k) {
  const std::vector<unsigned char> bytes = Base64Decode(text);
  const size_t n = static_cast<size_t>(h) * w * k;
  if (bytes.size() != n * 4) throw FormatError("feature payload size mismatch");
  std::vector<double> values(n);
  for (size_t i = 0; i < n; ++i) {
    uint32_t bits;
    std::memcpy(&bits, bytes.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    values[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return FeatureGrid(h, w, k, std::move(values));
}

template <typename Fn>
auto Guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

std::string FormatCell(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string Base64Encode(std::span<const unsigned char> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const size_t rest = bytes.size() - i;
  if (rest == 1) {
    const uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<unsigned char> Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) throw FormatError("base64 length not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=' && i + 4 == text.size() && j >= 2) {
        v[j] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw FormatError("base64 data after padding");
      v[j] = DecodeChar(c);
      if (v[j] < 0) throw FormatError("invalid base64 character");
    }
    const uint32_t triple = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<unsigned char>((triple >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<unsigned char>((triple >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<unsigned char>(triple & 0xff));
  }
  return out;
}

std::string SerializeDataset(const Dataset& dataset) {
  json images = json::array();
  for (const Scene& s : dataset.images) {
    json gt = json::array();
    for (const SceneObject& o : s.objects) {
      gt.push_back({{"c", o.category}, {"box", BoxToJson(o.body)}, {"part", BoxToJson(o.part)}});
    }
    json proposals = json::array();
    for (const BoundingBox& b : s.proposals) proposals.push_back(BoxToJson(b));
    images.push_back({{"id", s.id},
                      {"h", s.features.height()},
                      {"w", s.features.width()},
                      {"k", s.features.channels()},
                      {"features", FeaturesToBase64(s.features)},
                      {"labels", s.labels},
                      {"gt", std::move(gt)},
                      {"proposals", std::move(proposals)}});
  }
  json root = {{"num_categories", dataset.num_categories}, {"images", std::move(images)}};
  return root.dump();
}

Dataset ParseDataset(std::string_view text) {
  return Guarded("dataset", [&] {
    const json root = json::parse(text);
    Dataset ds;
    ds.num_categories = root.at("num_categories").get<int>();
    if (ds.num_categories < 1) throw FormatError("num_categories < 1");
    for (const json& img : root.at("images")) {
      Scene s;
      s.id = img.at("id").get<int>();
      s.features = FeaturesFromBase64(img.at("features").get<std::string>(),
                                      img.at("h").get<int>(), img.at("w").get<int>(),
                                      img.at("k").get<int>());
      s.labels = img.at("labels").get<std::vector<int>>();
      for (const json& g : img.at("gt")) {
        const BoundingBox body = BoxFromJson(g.at("box"));
        const BoundingBox part = g.contains("part") ? BoxFromJson(g.at("part")) : body;
        s.objects.push_back({g.at("c").get<int>(), body, part});
      }
      for (const json& p : img.at("proposals")) s.proposals.push_back(BoxFromJson(p));
      if (s.proposals.empty()) throw FormatError("image without proposals");
      for (const BoundingBox& b : s.proposals) {
        if (!b.InsideImage(s.features.width(), s.features.height())) {
          throw FormatError("proposal outside image " + std::to_string(s.id));
        }
      }
      for (int c : s.labels) {
        if (c < 0 || c >= ds.num_categories) throw FormatError("label out of range");
      }
      ds.images.push_back(std::move(s));
    }
    return ds;
  });
}

std::string SerializeModel(const MscModel& model) {
  json cats = json::object();
  for (int c = 0; c < model.num_categories(); ++c) {
    const CategoryHead& h = model.head(c);
    cats[std::to_string(c)] = {{"cls_w", h.cls_weights}, {"cls_b", h.cls_bias},
                               {"sal_w", h.sal_weights}};
  }
  json root = {{"pooled_size", model.pooled_size()},
               {"channels", model.channels()},
               {"categories", std::move(cats)}};
  return root.dump();
}

MscModel ParseModel(std::string_view text) {
  return Guarded("model", [&] {
    const json root = json::parse(text);
    const json& cats = root.at("categories");
    const int n = static_cast<int>(cats.size());
    MscModel model(n, root.at("pooled_size").get<int>(), root.at("channels").get<int>());
    for (auto it = cats.begin(); it != cats.end(); ++it) {
      const int c = std::stoi(it.key());
      if (c < 0 || c >= n) throw FormatError("category keys must be 0..C-1");
      CategoryHead& h = model.head(c);
      h.cls_weights = it.value().at("cls_w").get<std::vector<double>>();
      h.cls_bias = it.value().at("cls_b").get<double>();
      h.sal_weights = it.value().at("sal_w").get<std::vector<double>>();
      if (static_cast<int>(h.cls_weights.size()) != model.feature_size() ||
          static_cast<int>(h.sal_weights.size()) != model.feature_size()) {
        throw FormatError("weight array length does not match P*P*K");
      }
    }
    return model;
  });
}

std::string SerializePredictions(std::span<const ScoredBox> predictions) {
  json list = json::array();
  for (const ScoredBox& p : predictions) {
    list.push_back({{"image", p.image_id}, {"c", p.category}, {"box", BoxToJson(p.box)},
                    {"score", p.score}});
  }
  return json{{"predictions", std::move(list)}}.dump();
}

std::vector<ScoredBox> ParsePredictions(std::string_view text) {
  return Guarded("predictions", [&] {
    const json root = json::parse(text);
    std::vector<ScoredBox> out;
    for (const json& p : root.at("predictions")) {
      out.push_back({p.at("image").get<int>(), p.at("c").get<int>(), BoxFromJson(p.at("box")),
                     p.at("score").get<double>()});
    }
    return out;
  });
}

std::string SerializeState(const CurriculumState& state) {
  auto maybe_box = [](const MaybeBox& b) { return b ? BoxToJson(*b) : json(nullptr); };
  json records = json::array();
  for (const ExampleRecord& r : state.records) {
    records.push_back({{"image", r.image_id},
                       {"c", r.category},
                       {"det", maybe_box(r.det)},
                       {"ssg", maybe_box(r.ssg)},
                       {"S", r.consistency ? json(*r.consistency) : json(nullptr)},
                       {"selected", r.selected},
                       {"forced", r.forced},
                       {"selected_round", r.selected_round},
                       {"pseudo_box", maybe_box(r.pseudo_box)}});
  }
  return json{{"round", state.round},
              {"T", state.threshold},
              {"max_rounds", state.max_rounds},
              {"records", std::move(records)}}
      .dump(1);
}

std::string MetricsCsv(std::span<const RoundMetrics> rounds) {
  std::string out = "round,n_selected,corloc_selected,corloc_all,mean_S\n";
  for (const RoundMetrics& m : rounds) {
    out += std::to_string(m.round) + "," + std::to_string(m.n_selected) + "," +
           FormatCell(m.corloc_selected) + "," + FormatCell(m.corloc_all) + "," +
           FormatCell(m.mean_consistency) + "\n";
  }
  return out;
}

std::vector<unsigned char> PlaneToGray(const Plane& plane) {
  std::vector<unsigned char> out;
  out.reserve(plane.size());
  for (double v : plane.values()) {
    out.push_back(static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0))));
  }
  return out;
}

std::vector<unsigned char> MaskToGray(const LabeledMask& mask) {
  std::vector<unsigned char> out;
  out.reserve(mask.labels().size());
  for (int label : mask.labels()) {
    if (label == kBackground) {
      out.push_back(0);
    } else if (label == kUnlabeled) {
      out.push_back(255);
    } else {
      out.push_back(static_cast<unsigned char>(std::min(label + 1, 254)));
    }
  }
  return out;
}

std::vector<unsigned char> SeedsToGray(const SeedMask& seeds, int label) {
  std::vector<unsigned char> out;
  out.reserve(seeds.labels.labels().size());
  for (int l : seeds.labels.labels()) out.push_back(l == label ? 255 : 0);
  return out;
}

std::string EncodePgm(int width, int height, std::span<const unsigned char> gray) {
  if (gray.size() != static_cast<size_t>(width) * height) {
    throw std::invalid_argument("EncodePgm: pixel count mismatch");
  }
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(gray.data()), gray.size());
  return out;
}

PgmImage DecodePgm(std::string_view bytes) {
  std::istringstream is{std::string(bytes)};
  std::string magic;
  int maxval = 0;
  PgmImage img;
  if (!(is >> magic >> img.width >> img.height >> maxval) || magic != "P5" || maxval != 255) {
    throw FormatError("not a P5 PGM with maxval 255");
  }
  is.get();  // single whitespace before the raster
  img.gray.resize(static_cast<size_t>(img.width) * img.height);
  if (!is.read(reinterpret_cast<char*>(img.gray.data()), img.gray.size())) {
    throw FormatError("truncated PGM raster");
  }
  return img;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace micl
