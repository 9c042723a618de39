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

#include "gmrc/checkpoint.hpp"

#include <cmath>
#include <fstream>

#include "gmrc/dataset.hpp"
#include "gmrc/errors.hpp"
#include "gmrc/train.hpp"
#include "json.hpp"

namespace gmrc {

namespace {
constexpr int kCheckpointVersion = 1;
}  // namespace

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  nlohmann::ordered_json o;
  o["format"] = "gmrc-params";
  o["version"] = kCheckpointVersion;
  o["config"] = nlohmann::ordered_json::parse(TrainConfigToJson(ckpt.config));
  o["relations"] = ckpt.relations;
  o["na_label"] = ckpt.na_label ? nlohmann::ordered_json(*ckpt.na_label)
                                : nlohmann::ordered_json(nullptr);
  o["vocab"] = ckpt.vocab;
  nlohmann::ordered_json arrays = nlohmann::ordered_json::array();
  for (const auto& [name, t] : ckpt.params.Named()) {
    nlohmann::ordered_json a;
    a["name"] = name;
    a["shape"] = {t->rows(), t->cols()};
    a["data"] = t->data();
    arrays.push_back(std::move(a));
  }
  o["arrays"] = std::move(arrays);
  return o.dump();
}

Checkpoint ParseCheckpoint(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || root.value("format", "") != "gmrc-params") {
    Fail(ErrorCode::kSchema, "not a gmrc-params checkpoint");
  }
  if (root.value("version", 0) != kCheckpointVersion) {
    Fail(ErrorCode::kSchema, "unsupported checkpoint version");
  }
  Checkpoint ckpt;
  try {
    ckpt.config = ParseTrainConfig(root.at("config").dump());
    ckpt.relations = root.at("relations").get<std::vector<std::string>>();
    if (!root.at("na_label").is_null()) ckpt.na_label = root.at("na_label").get<std::string>();
    ckpt.vocab = root.at("vocab").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("malformed checkpoint: ") + e.what());
  }
  const EncoderConfig enc = EffectiveEncoder(ckpt.config);
  ckpt.params = InitParams(enc, ckpt.vocab.size(), ckpt.relations.size(), 0);
  auto named = ckpt.params.Named();
  const auto& arrays = root.at("arrays");
  if (!arrays.is_array() || arrays.size() != named.size()) {
    Fail(ErrorCode::kSchema, "checkpoint holds " + std::to_string(arrays.size()) +
                                 " arrays; the config needs " + std::to_string(named.size()));
  }
  for (std::size_t k = 0; k < named.size(); ++k) {
    const auto& a = arrays[k];
    Tensor& t = *named[k].second;
    try {
      if (a.at("name").get<std::string>() != named[k].first) {
        Fail(ErrorCode::kSchema, "expected array \"" + named[k].first + "\", found \"" +
                                     a.at("name").get<std::string>() + "\"");
      }
      const auto shape = a.at("shape").get<std::vector<std::size_t>>();
      auto data = a.at("data").get<std::vector<double>>();
      if (shape.size() != 2 || shape[0] != t.rows() || shape[1] != t.cols() ||
          data.size() != t.size()) {
        Fail(ErrorCode::kDimension, "array \"" + named[k].first + "\" should be " +
                                        t.ShapeString());
      }
      for (double v : data) {
        if (!std::isfinite(v)) Fail(ErrorCode::kNumeric, "non-finite value in " + named[k].first);
      }
      t.data() = std::move(data);
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kSchema, "malformed array entry: " + std::string(e.what()));
    }
  }
  return ckpt;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  out << SerializeCheckpoint(ckpt) << "\n";
}

Checkpoint LoadCheckpoint(const std::string& path) {
  return ParseCheckpoint(ReadFile(path));
}

}  // namespace gmrc
