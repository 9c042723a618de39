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

// Parameter checkpoints: a JSON document of named arrays with shapes.
//
// {"format": "gmrc-params", "version": 1, "config": {...},
//  "relations": [...], "na_label": str|null, "vocab": [...],
//  "arrays": [{"name": "embedding", "shape": [V, d], "data": [...]}, ...]}
//
// Array names follow ModelParams::Named(); data is row-major.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmrc/config.hpp"
#include "gmrc/encoders.hpp"
#include "gmrc/rc_model.hpp"

namespace gmrc {

struct Checkpoint {
  TrainConfig config;
  std::vector<std::string> relations;
  std::optional<std::string> na_label;
  std::vector<std::string> vocab;
  ModelParams params;
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
// Checks array names and shapes against the stored config.
Checkpoint ParseCheckpoint(std::string_view text);

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace gmrc
