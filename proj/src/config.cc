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

#include <charconv>
#include <cmath>
#include <functional>

namespace micl {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool InOpenUnit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

ApVariant ParseApVariant(std::string_view name) {
  if (name == "voc07") return ApVariant::kVoc07;
  if (name == "area") return ApVariant::kArea;
  throw ConfigError("ap_variant must be voc07 or area");
}

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError("repeated key " + key);
  }
  return out;
}

void ApplySetting(RunConfig& c, const std::string& key, const std::string& value) {
  using Setter = std::function<void(RunConfig&, const std::string&)>;
  auto dbl = [](double RunConfig::*f) -> Setter {
    return [f](RunConfig& c, const std::string& v) { c.*f = ParseNumber<double>("", v); };
  };
  auto num = [](int RunConfig::*f) -> Setter {
    return [f](RunConfig& c, const std::string& v) { c.*f = ParseNumber<int>("", v); };
  };
  auto gen_dbl = [](double GenConfig::*f) -> Setter {
    return [f](RunConfig& c, const std::string& v) {
      c.generation.*f = ParseNumber<double>("", v);
    };
  };
  auto gen_num = [](int GenConfig::*f) -> Setter {
    return [f](RunConfig& c, const std::string& v) {
      c.generation.*f = ParseNumber<int>("", v);
    };
  };
  static const std::map<std::string, Setter> kSetters = {
      {"dataset", [](RunConfig& c, const std::string& v) { c.dataset = v; }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = v; }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = ParseNumber<uint64_t>("", v); }},
      {"workers", num(&RunConfig::workers)},
      {"ap_variant", [](RunConfig& c, const std::string& v) { c.ap_variant = ParseApVariant(v); }},
      {"T", dbl(&RunConfig::threshold)},
      {"t_obj", dbl(&RunConfig::object_threshold)},
      {"t_bg", dbl(&RunConfig::background_threshold)},
      {"min_bg_fraction", dbl(&RunConfig::min_background_fraction)},
      {"tau", dbl(&RunConfig::similarity_tolerance)},
      {"max_rounds", num(&RunConfig::max_rounds)},
      {"lr", dbl(&RunConfig::learning_rate)},
      {"epochs", num(&RunConfig::epochs)},
      {"retrain_epochs", num(&RunConfig::retrain_epochs)},
      {"n_images", gen_num(&GenConfig::n_images)},
      {"n_categories", gen_num(&GenConfig::n_categories)},
      {"height", gen_num(&GenConfig::height)},
      {"width", gen_num(&GenConfig::width)},
      {"channels", gen_num(&GenConfig::channels)},
      {"min_objects", gen_num(&GenConfig::min_objects)},
      {"max_objects", gen_num(&GenConfig::max_objects)},
      {"min_body_size", gen_num(&GenConfig::min_body_size)},
      {"max_body_size", gen_num(&GenConfig::max_body_size)},
      {"min_part_ratio", gen_dbl(&GenConfig::min_part_ratio)},
      {"max_part_ratio", gen_dbl(&GenConfig::max_part_ratio)},
      {"noise_sigma", gen_dbl(&GenConfig::noise_sigma)},
      {"discriminative_part_prob", gen_dbl(&GenConfig::discriminative_part_prob)},
      {"cluster_prob", gen_dbl(&GenConfig::cluster_prob)},
      {"surround_prob", gen_dbl(&GenConfig::surround_prob)},
      {"surround_body_value", gen_dbl(&GenConfig::surround_body_value)},
      {"surround_context_value", gen_dbl(&GenConfig::surround_context_value)},
      {"body_value", gen_dbl(&GenConfig::body_value)},
      {"part_value", gen_dbl(&GenConfig::part_value)},
      {"background_value", gen_dbl(&GenConfig::background_value)},
  };
  const auto it = kSetters.find(key);
  if (it == kSetters.end()) throw ConfigError("unknown config key " + key);
  try {
    it->second(c, value);
  } catch (const ConfigError&) {
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  }
}

void ApplySettings(RunConfig& config, const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) ApplySetting(config, key, value);
}

void RunConfig::Validate() const {
  Require(threshold >= 0.0 && threshold <= 1.0, "T must lie in [0, 1]");
  Require(InOpenUnit(object_threshold), "t_obj must lie in (0, 1)");
  Require(background_threshold > 0.0 && background_threshold <= 1.0, "t_bg must lie in (0, 1]");
  Require(min_background_fraction >= 0.0 && min_background_fraction <= 1.0,
          "min_bg_fraction must lie in [0, 1]");
  Require(similarity_tolerance > 0.0 && std::isfinite(similarity_tolerance),
          "tau must be positive");
  Require(max_rounds >= 0, "max_rounds must be >= 0");
  Require(learning_rate > 0.0 && std::isfinite(learning_rate), "lr must be positive");
  Require(epochs >= 0 && retrain_epochs >= 0, "epochs must be >= 0");
  Require(workers >= 0, "workers must be >= 0");
  Require(!out.empty(), "out must be a path");
  try {
    ToGenConfig().Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

MiclConfig RunConfig::ToMiclConfig() const {
  MiclConfig m;
  m.threshold = threshold;
  m.max_rounds = max_rounds;
  m.localization.object_threshold = object_threshold;
  m.localization.background_threshold = background_threshold;
  m.localization.min_background_fraction = min_background_fraction;
  m.region_grow.similarity_tolerance = similarity_tolerance;
  m.init_training.epochs = epochs;
  m.init_training.learning_rate = learning_rate;
  m.retraining.epochs = retrain_epochs;
  m.retraining.learning_rate = learning_rate;
  m.seed = seed;
  return m;
}

GenConfig RunConfig::ToGenConfig() const {
  GenConfig g = generation;
  g.seed = seed;
  return g;
}

}  // namespace micl
