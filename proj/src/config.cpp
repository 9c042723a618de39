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

#include "gmrc/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gmrc/errors.hpp"
#include "json.hpp"

namespace gmrc {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void RejectUnknown(const json& obj, const std::set<std::string>& allowed,
                   const std::string& where) {
  if (!obj.is_object()) Fail(ErrorCode::kConfig, where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      Fail(ErrorCode::kConfig, "unknown key \"" + key + "\" in " + where);
    }
  }
}

template <typename T>
void Read(const json& obj, const char* key, T* out, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    *out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    Fail(ErrorCode::kConfig, "bad value for \"" + std::string(key) + "\" in " + where);
  }
}

std::string Resolve(const std::string& base, const std::string& path) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

GraphSource ParseGraphSource(std::string_view name) {
  if (name == "gmr") return GraphSource::kGmr;
  if (name == "random") return GraphSource::kRandom;
  if (name == "none") return GraphSource::kNone;
  Fail(ErrorCode::kConfig,
       "unknown graph source \"" + std::string(name) + "\"; use gmr|random|none");
}

const char* GraphSourceName(GraphSource s) {
  switch (s) {
    case GraphSource::kGmr: return "gmr";
    case GraphSource::kRandom: return "random";
    case GraphSource::kNone: return "none";
  }
  return "gmr";
}

std::string DataConfig::InstancesPath(std::string_view split) const {
  const std::string& explicit_path =
      split == "train" ? train : split == "dev" ? dev : test;
  if (!explicit_path.empty()) return explicit_path;
  if (dir.empty()) return "";
  return Join(dir, std::string(split) + ".instances.jsonl");
}

std::string DataConfig::GmrPath(std::string_view split) const {
  const std::string& explicit_path =
      split == "train" ? train_gmr : split == "dev" ? dev_gmr : test_gmr;
  if (!explicit_path.empty()) return explicit_path;
  if (dir.empty()) return "";
  const std::string suffix =
      parser.empty() || parser == "gold" ? ".gmr.jsonl" : ".gmr." + parser + ".jsonl";
  return Join(dir, std::string(split) + suffix);
}

std::string DataConfig::VocabPath() const {
  if (!vocab.empty()) return vocab;
  return dir.empty() ? "" : Join(dir, "vocab.txt");
}

std::string DataConfig::PronounsPath() const {
  if (!pronouns.empty()) return pronouns;
  if (dir.empty()) return "";
  const std::string p = Join(dir, "pronouns.txt");
  return fs::exists(p) ? p : "";
}

bool DataConfig::HasSplit(std::string_view split) const {
  const std::string p = InstancesPath(split);
  return !p.empty() && fs::exists(p);
}

void CheckTrainConfig(const TrainConfig& cfg) {
  if (cfg.version != kConfigVersion) {
    Fail(ErrorCode::kConfig, "unsupported config version " + std::to_string(cfg.version));
  }
  if (!(cfg.learning_rate > 0.0)) Fail(ErrorCode::kConfig, "learning_rate must be > 0");
  if (cfg.epochs < 1) Fail(ErrorCode::kConfig, "epochs must be >= 1");
  if (cfg.batch_size < 1) Fail(ErrorCode::kConfig, "batch_size must be >= 1");
  if (cfg.seeds.empty()) Fail(ErrorCode::kConfig, "at least one seed is required");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) {
    Fail(ErrorCode::kConfig, "Adam betas must lie in [0, 1)");
  }
  if (!(cfg.adam_epsilon > 0.0)) Fail(ErrorCode::kConfig, "Adam epsilon must be > 0");
  if (cfg.max_length < 4) Fail(ErrorCode::kConfig, "max_length must leave room for markers");
  CheckEncoderConfig(cfg.encoder);
}

TrainConfig ParseTrainConfig(std::string_view json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  RejectUnknown(root,
                {"version", "data", "scheme", "max_length", "na_label", "encoder",
                 "graph", "train"},
                "config");
  TrainConfig cfg;
  Read(root, "version", &cfg.version, "config");
  if (!root.contains("version")) {
    Fail(ErrorCode::kConfig, "config must declare \"version\"");
  }

  if (root.contains("data")) {
    const json& d = root.at("data");
    RejectUnknown(d,
                  {"dir", "parser", "train", "train_gmr", "dev", "dev_gmr", "test",
                   "test_gmr", "vocab", "pronouns"},
                  "data");
    DataConfig& dc = cfg.data;
    for (auto [key, field] : std::initializer_list<std::pair<const char*, std::string*>>{
                             {"dir", &dc.dir}, {"parser", &dc.parser},
                              {"train", &dc.train}, {"train_gmr", &dc.train_gmr},
                              {"dev", &dc.dev}, {"dev_gmr", &dc.dev_gmr},
                              {"test", &dc.test}, {"test_gmr", &dc.test_gmr},
                              {"vocab", &dc.vocab}, {"pronouns", &dc.pronouns}}) {
      Read(d, key, field, "data");
      if (std::string(key) != "parser") *field = Resolve(base_dir, *field);
    }
  }

  std::string scheme = MarkerSchemeName(cfg.scheme);
  Read(root, "scheme", &scheme, "config");
  cfg.scheme = ParseMarkerScheme(scheme);
  Read(root, "max_length", &cfg.max_length, "config");
  if (root.contains("na_label") && !root.at("na_label").is_null()) {
    std::string na;
    Read(root, "na_label", &na, "config");
    cfg.na_label = na;
  }

  if (root.contains("encoder")) {
    const json& e = root.at("encoder");
    RejectUnknown(e, {"d", "layers", "activation", "mixer", "graph_encoder", "self_loops"},
                  "encoder");
    Read(e, "d", &cfg.encoder.d, "encoder");
    Read(e, "layers", &cfg.encoder.layers, "encoder");
    Read(e, "self_loops", &cfg.encoder.self_loops, "encoder");
    std::string s = ActivationName(cfg.encoder.activation);
    Read(e, "activation", &s, "encoder");
    cfg.encoder.activation = ParseActivation(s);
    s = MixerName(cfg.encoder.mixer);
    Read(e, "mixer", &s, "encoder");
    cfg.encoder.mixer = ParseMixer(s);
    s = GraphEncoderName(cfg.encoder.graph_encoder);
    Read(e, "graph_encoder", &s, "encoder");
    cfg.encoder.graph_encoder = ParseGraphEncoder(s);
  }

  if (root.contains("graph")) {
    const json& g = root.at("graph");
    RejectUnknown(g, {"source", "random_seed", "prune_punct"}, "graph");
    std::string s = GraphSourceName(cfg.graph_source);
    Read(g, "source", &s, "graph");
    cfg.graph_source = ParseGraphSource(s);
    Read(g, "random_seed", &cfg.random_graph_seed, "graph");
    Read(g, "prune_punct", &cfg.prune_punct, "graph");
  }

  if (root.contains("train")) {
    const json& t = root.at("train");
    RejectUnknown(t,
                  {"learning_rate", "epochs", "batch_size", "seeds", "beta1", "beta2",
                   "epsilon", "threads"},
                  "train");
    Read(t, "learning_rate", &cfg.learning_rate, "train");
    Read(t, "epochs", &cfg.epochs, "train");
    Read(t, "batch_size", &cfg.batch_size, "train");
    Read(t, "seeds", &cfg.seeds, "train");
    Read(t, "beta1", &cfg.beta1, "train");
    Read(t, "beta2", &cfg.beta2, "train");
    Read(t, "epsilon", &cfg.adam_epsilon, "train");
    Read(t, "threads", &cfg.threads, "train");
  }
  CheckTrainConfig(cfg);
  return cfg;
}

TrainConfig LoadTrainConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseTrainConfig(buf.str(), fs::path(path).parent_path().string());
}

std::string TrainConfigToJson(const TrainConfig& cfg, int indent) {
  ordered_json root;
  root["version"] = cfg.version;
  ordered_json data;
  data["dir"] = cfg.data.dir;
  data["parser"] = cfg.data.parser;
  data["train"] = cfg.data.train;
  data["train_gmr"] = cfg.data.train_gmr;
  data["dev"] = cfg.data.dev;
  data["dev_gmr"] = cfg.data.dev_gmr;
  data["test"] = cfg.data.test;
  data["test_gmr"] = cfg.data.test_gmr;
  data["vocab"] = cfg.data.vocab;
  data["pronouns"] = cfg.data.pronouns;
  root["data"] = std::move(data);
  root["scheme"] = MarkerSchemeName(cfg.scheme);
  root["max_length"] = cfg.max_length;
  root["na_label"] = cfg.na_label ? ordered_json(*cfg.na_label) : ordered_json(nullptr);
  ordered_json enc;
  enc["d"] = cfg.encoder.d;
  enc["layers"] = cfg.encoder.layers;
  enc["activation"] = ActivationName(cfg.encoder.activation);
  enc["mixer"] = MixerName(cfg.encoder.mixer);
  enc["graph_encoder"] = GraphEncoderName(cfg.encoder.graph_encoder);
  enc["self_loops"] = cfg.encoder.self_loops;
  root["encoder"] = std::move(enc);
  ordered_json graph;
  graph["source"] = GraphSourceName(cfg.graph_source);
  graph["random_seed"] = cfg.random_graph_seed;
  graph["prune_punct"] = cfg.prune_punct;
  root["graph"] = std::move(graph);
  ordered_json train;
  train["learning_rate"] = cfg.learning_rate;
  train["epochs"] = cfg.epochs;
  train["batch_size"] = cfg.batch_size;
  train["seeds"] = cfg.seeds;
  train["beta1"] = cfg.beta1;
  train["beta2"] = cfg.beta2;
  train["epsilon"] = cfg.adam_epsilon;
  train["threads"] = cfg.threads;
  root["train"] = std::move(train);
  return root.dump(indent);
}

}  // namespace gmrc
