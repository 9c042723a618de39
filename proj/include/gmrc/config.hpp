// Copyright 2026 The gmrc Authors.
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

#pragma once

// Versioned JSON training configuration. Every key is optional; unknown
// keys are rejected.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmrc/encoders.hpp"
#include "gmrc/tokenize.hpp"

namespace gmrc {

enum class GraphSource { kGmr, kRandom, kNone };

GraphSource ParseGraphSource(std::string_view name);  // gmr|random|none
const char* GraphSourceName(GraphSource s);

inline constexpr int kConfigVersion = 1;

// File locations. Empty paths are derived from `dir` using the layout
// written by the synthetic generator:
//   <dir>/vocab.txt, <dir>/<split>.instances.jsonl, <dir>/<split>.gmr.jsonl
// and <dir>/<split>.gmr.<parser>.jsonl when `parser` is set.
struct DataConfig {
  std::string dir;
  std::string parser;
  std::string train, train_gmr;
  std::string dev, dev_gmr;
  std::string test, test_gmr;
  std::string vocab;
  std::string pronouns;

  std::string InstancesPath(std::string_view split) const;
  std::string GmrPath(std::string_view split) const;
  std::string VocabPath() const;
  // Empty when neither `pronouns` nor <dir>/pronouns.txt is available.
  std::string PronounsPath() const;
  bool HasSplit(std::string_view split) const;
};

struct TrainConfig {
  int version = kConfigVersion;
  DataConfig data;
  MarkerScheme scheme = MarkerScheme::kEntityMarker;
  std::size_t max_length = kDefaultMaxLength;
  std::optional<std::string> na_label;
  EncoderConfig encoder;
  GraphSource graph_source = GraphSource::kGmr;
  std::uint64_t random_graph_seed = 17;
  bool prune_punct = false;

  double learning_rate = 5e-4;
  std::size_t epochs = 5;
  std::size_t batch_size = 32;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Seeds trained concurrently; results do not depend on it.
  std::size_t threads = 1;
};

// Throws ConfigError on invalid values.
void CheckTrainConfig(const TrainConfig& cfg);

// `base_dir` resolves relative data paths.
TrainConfig ParseTrainConfig(std::string_view json_text,
                             const std::string& base_dir = "");
TrainConfig LoadTrainConfig(const std::string& path);
std::string TrainConfigToJson(const TrainConfig& cfg, int indent = 2);

}  // namespace gmrc
