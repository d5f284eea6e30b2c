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

// Run configuration. Config files are flat "key = value" lines; '#' starts
// a comment. Command-line flags are applied on top.

#ifndef MICL_CONFIG_H_
#define MICL_CONFIG_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "micl/curriculum.h"
#include "micl/evaluation.h"
#include "micl/synthdata.h"

namespace micl {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string dataset;
  std::string out = "out";
  uint64_t seed = 0;
  int workers = 0;  // 0 = all available cores
  ApVariant ap_variant = ApVariant::kVoc07;

  double threshold = kDefaultConsistencyThreshold;
  double object_threshold = kDefaultObjectThreshold;
  double background_threshold = kDefaultBackgroundThreshold;
  double min_background_fraction = kDefaultMinBackgroundFraction;
  double similarity_tolerance = 0.5;
  int max_rounds = kDefaultMaxRounds;
  double learning_rate = 0.1;
  int epochs = 300;          // image-label training
  int retrain_epochs = 300;  // box-level re-training

  GenConfig generation;  // used by `generate`; its seed follows `seed`

  void Validate() const;
  MiclConfig ToMiclConfig() const;
  GenConfig ToGenConfig() const;
};

// Parses "key = value" lines. Throws ConfigError on malformed lines or
// repeated keys.
std::map<std::string, std::string> ParseKeyValues(std::string_view text);

// Throws ConfigError on unknown keys or unparsable values.
void ApplySetting(RunConfig& config, const std::string& key, const std::string& value);
void ApplySettings(RunConfig& config, const std::map<std::string, std::string>& settings);

ApVariant ParseApVariant(std::string_view name);

}  // namespace micl

#endif  // MICL_CONFIG_H_
