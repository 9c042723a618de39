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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gmrc/checkpoint.hpp"
#include "gmrc/config.hpp"
#include "gmrc/dataset.hpp"
#include "gmrc/errors.hpp"
#include "gmrc/experiment.hpp"
#include "gmrc/synthetic.hpp"
#include "gmrc/train.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gmrc;
using gmrc::testing::ReadFixture;
using gmrc::testing::ScratchDir;
using gmrc::testing::WriteText;

namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{0};
}

SyntheticSpec TinySpec(std::size_t n_train, std::size_t n_test) {
  SyntheticSpec spec;
  spec.n_train = n_train;
  spec.n_test = n_test;
  spec.sentence_len = 14;
  spec.distance_min = 4;
  spec.filler_words = 60;
  spec.clue_words_per_relation = 3;
  return spec;
}

// Synthetic data written to a fresh directory; returns the directory.
std::string WriteTiny(const std::string& name, std::size_t n_train, std::size_t n_test,
                      std::uint64_t seed = 1) {
  const std::string dir = ScratchDir(name);
  const auto spec = TinySpec(n_train, n_test);
  WriteSynthetic(GenerateSynthetic(spec, seed), spec, dir);
  return dir;
}

TrainConfig TinyConfig(const std::string& dir) {
  TrainConfig cfg;
  cfg.data.dir = dir;
  cfg.encoder.d = 8;
  cfg.encoder.mixer = Mixer::kNone;
  cfg.learning_rate = 5e-3;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  cfg.seeds = {1, 2};
  return cfg;
}

std::vector<std::size_t> PathBetween(const WordGraph& g, std::size_t a, std::size_t b) {
  const std::size_t n = g.words.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Edge& e : g.edges) {
    adj[e.head].push_back(e.dep);
    adj[e.dep].push_back(e.head);
  }
  std::vector<std::size_t> prev(n, n);
  std::vector<std::size_t> queue{a};
  prev[a] = a;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (std::size_t v : adj[queue[q]]) {
      if (prev[v] == n) {
        prev[v] = queue[q];
        queue.push_back(v);
      }
    }
  }
  std::vector<std::size_t> path;
  if (prev[b] == n) return path;
  for (std::size_t v = b; v != a; v = prev[v]) path.push_back(v);
  path.push_back(a);
  return path;
}

// Straightforward re-statement of the bootstrap with the same draws.
// Means are compared after a plain sum, so near-ties round the same way.
double BootstrapOracle(const std::vector<double>& a, const std::vector<double>& b,
                       std::size_t resamples, std::uint64_t seed) {
  Rng rng(seed);
  double hits = 0;
  for (std::size_t r = 0; r < resamples; ++r) {
    double sa = 0, sb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::size_t i = rng.Uniform(a.size());
      sa += a[i];
      sb += b[i];
    }
    const double n = static_cast<double>(a.size());
    hits += sa / n < sb / n ? 1.0 : sa / n == sb / n ? 0.5 : 0.0;
  }
  return hits / static_cast<double>(resamples);
}

}  // namespace

// ---- dataset ---------------------------------------------------------------

TEST_CASE("dataset: 10 matching instances join") {
  const std::string dir = WriteTiny("join10", 0, 10);
  auto cfg = TinyConfig(dir);
  const Dataset ds = LoadDataset(cfg);
  CHECK(ds.test.size() == 10);
  CHECK(ds.test.n_rejected() == 0);
  CHECK_FALSE(ds.has_dev);
  for (std::size_t i = 0; i < 10; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "test-%05zu", i);
    CHECK(ds.test.items[i].id == id);
  }
}

TEST_CASE("dataset: a missing graph is a join error naming the instance") {
  const std::string dir = WriteTiny("join_missing", 0, 10);
  auto instances = LoadInstances(dir + "/test.instances.jsonl");
  auto graphs = LoadGraphs(dir + "/test.gmr.jsonl");
  graphs.pop_back();
  try {
    CheckJoin(instances, graphs);
    FAIL("expected a join error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kJoin);
    CHECK(std::string(e.what()).find(instances.back().id) != std::string::npos);
  }
  // Word mismatch is also a join error.
  graphs = LoadGraphs(dir + "/test.gmr.jsonl");
  graphs[3].words[0] += "x";
  try {
    CheckJoin(instances, graphs);
    FAIL("expected a join error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kJoin);
    CHECK(std::string(e.what()).find(instances[3].id) != std::string::npos);
  }
}

TEST_CASE("dataset: over-length instance is rejected and counted") {
  const std::string dir = WriteTiny("overlength", 0, 10);
  auto instances = LoadInstances(dir + "/test.instances.jsonl");
  auto graphs = LoadGraphs(dir + "/test.gmr.jsonl");
  // Push instance 4's object past the length limit.
  RcInstance& inst = instances[4];
  WordGraph& g = graphs[4];
  for (int k = 0; k < 300; ++k) {
    inst.tokens.push_back("zz");
    g.words.push_back("zz");
  }
  inst.obj = {inst.tokens.size() - 1, inst.tokens.size()};
  std::string inst_text, graph_text = SerializeGraphJsonl(graphs);
  for (const auto& x : instances) inst_text += SerializeInstanceJson(x) + "\n";
  WriteText(dir + "/test.instances.jsonl", inst_text);
  WriteText(dir + "/test.gmr.jsonl", graph_text);

  const Dataset ds = LoadDataset(TinyConfig(dir));
  CHECK(ds.test.size() == 9);
  CHECK(ds.test.n_rejected() == 1);
  CHECK(ds.test.rejected_ids == std::vector<std::string>{instances[4].id});
  // Order of the kept items is preserved.
  CHECK(ds.test.items[4].id == instances[5].id);
}

TEST_CASE("dataset: graph sources") {
  const std::string dir = WriteTiny("sources", 0, 12);
  auto cfg = TinyConfig(dir);
  const Dataset gold = LoadDataset(cfg);
  cfg.graph_source = GraphSource::kRandom;
  const Dataset random = LoadDataset(cfg);
  cfg.graph_source = GraphSource::kNone;
  const Dataset none = LoadDataset(cfg);
  for (std::size_t i = 0; i < gold.test.size(); ++i) {
    const auto& g = gold.test.items[i].graph;
    const auto& r = random.test.items[i].graph;
    const auto& z = none.test.items[i].graph;
    CHECK(r.CountEdges(EdgeKind::kDependency) == g.CountEdges(EdgeKind::kDependency));
    CHECK(z.CountEdges(EdgeKind::kDependency) == 0);
    CHECK(z.CountEdges(EdgeKind::kSpecial) == g.CountEdges(EdgeKind::kSpecial));
  }
}

TEST_CASE("dataset: missing test split") {
  const std::string dir = ScratchDir("no_test");
  WriteText(dir + "/vocab.txt", "a\n");
  CHECK(CodeOf([&] { LoadDataset(TinyConfig(dir)); }) == ErrorCode::kIo);
}

TEST_CASE("group split") {
  const auto lexicon = DefaultPronounLexicon();
  const std::set<std::string> lex(lexicon.begin(), lexicon.end());
  RcInstance he;
  he.tokens = {"He", "founded", "Acme"};
  he.subj = {0, 1};
  he.obj = {2, 3};
  CHECK(IsPronounInstance(he, lex));

  RcInstance fed;
  fed.tokens = {"Pakistan", "Boxing", "Federation", "hired", "He"};
  fed.subj = {0, 3};
  fed.obj = {4, 5};
  CHECK(IsPronounInstance(fed, lex));

  RcInstance plain = fed;
  plain.tokens[4] = "Ali";
  CHECK_FALSE(IsPronounInstance(plain, lex));

  // Pronouns outside the entity spans do not count.
  RcInstance outside = plain;
  outside.tokens[3] = "she";
  CHECK_FALSE(IsPronounInstance(outside, lex));

  const std::vector<RcInstance> all = {he, fed, plain, outside, he};
  const auto [mention, pronoun] = GroupSplit(all, lex);
  CHECK(pronoun == std::vector<std::size_t>{0, 1, 4});
  CHECK(mention == std::vector<std::size_t>{2, 3});
  CHECK(CodeOf([&] { GroupSplit(all, {}); }) == ErrorCode::kContract);
}

TEST_CASE("group split partitions synthetic data") {
  const auto data = GenerateSynthetic(TinySpec(400, 0), 4);
  const auto lexicon = DefaultPronounLexicon();
  const auto [mention, pronoun] = GroupSplit(data.train.instances, {lexicon.begin(), lexicon.end()});
  CHECK(mention.size() + pronoun.size() == data.train.instances.size());
  std::set<std::size_t> all(mention.begin(), mention.end());
  for (std::size_t i : pronoun) CHECK(all.insert(i).second);
  CHECK(pronoun.size() > 0);
}

TEST_CASE("pronoun lexicon file") {
  const auto lex = ParsePronounLexicon("# comment\nHe\n\nthem\n");
  CHECK(lex == std::set<std::string>{"he", "them"});
  CHECK(LoadPronounLexicon("").count("herself") == 1);
}

// ---- synthetic -------------------------------------------------------------

TEST_CASE("synthetic: spec checks") {
  auto spec = TinySpec(10, 10);
  spec.n_relations = 1;
  CHECK(CodeOf([&] { CheckSyntheticSpec(spec); }) == ErrorCode::kConfig);
  spec = TinySpec(10, 10);
  spec.sentence_len = spec.distance_min + 3;
  CHECK(CodeOf([&] { GenerateSynthetic(spec, 1); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseSyntheticSpec(R"({"n_train": 5, "colour": 1})"); }) == ErrorCode::kConfig);
  const auto parsed = ParseSyntheticSpec(SyntheticSpecToJson(TinySpec(7, 9)));
  CHECK(parsed.n_train == 7);
  CHECK(parsed.n_test == 9);
  CHECK(parsed.sentence_len == 14);
}

TEST_CASE("synthetic: same seed gives byte-identical files") {
  const std::string a = WriteTiny("synth_a", 30, 10, 9);
  const std::string b = WriteTiny("synth_b", 30, 10, 9);
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    const auto name = entry.path().filename().string();
    CHECK(ReadFile(a + "/" + name) == ReadFile(b + "/" + name));
  }
  const std::string c = WriteTiny("synth_c", 30, 10, 10);
  CHECK(ReadFile(a + "/train.instances.jsonl") != ReadFile(c + "/train.instances.jsonl"));
}

TEST_CASE("synthetic: trees validate and the clue sits on the entity path") {
  SyntheticSpec spec;
  spec.n_train = 1000;
  spec.n_test = 0;
  const auto data = GenerateSynthetic(spec, 5);
  const auto& split = data.train;
  REQUIRE(split.graphs.size() == 1000);
  std::map<std::string, std::size_t> rel_index;
  for (std::size_t r = 0; r < data.relations.size(); ++r) rel_index[data.relations[r]] = r;

  std::size_t invalid = 0, off_path = 0, too_close = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto& inst = split.instances[i];
    const auto& g = split.graphs[i];
    const auto report = ValidateGraph(g);
    invalid += !(report.is_single_headed && report.is_acyclic && report.is_connected);
    invalid += !ValidateGraph(split.noisy_graphs[i]).violations.empty();

    const auto& clues = data.clue_words[rel_index.at(inst.relation)];
    std::size_t clue = inst.tokens.size();
    for (std::size_t p = 0; p < inst.tokens.size(); ++p) {
      if (std::find(clues.begin(), clues.end(), inst.tokens[p]) != clues.end()) clue = p;
    }
    REQUIRE(clue < inst.tokens.size());
    const auto path = PathBetween(g, inst.subj.begin, inst.obj.begin);
    off_path += std::find(path.begin(), path.end(), clue) == path.end();
    auto dist = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
    too_close += dist(clue, inst.subj.begin) < spec.distance_min ||
                 dist(clue, inst.obj.begin) < spec.distance_min;
  }
  CHECK(invalid == 0);
  CHECK(off_path == 0);
  CHECK(too_close == 0);
}

TEST_CASE("synthetic: label distribution is near uniform") {
  SyntheticSpec spec;
  spec.n_train = 2000;
  spec.n_test = 0;
  const auto data = GenerateSynthetic(spec, 6);
  std::map<std::string, std::size_t> counts;
  for (const auto& inst : data.train.instances) ++counts[inst.relation];
  CHECK(counts.size() == spec.n_relations);
  const double expected = 2000.0 / static_cast<double>(spec.n_relations);
  for (const auto& [rel, c] : counts) {
    CHECK(std::abs(static_cast<double>(c) - expected) <= 0.1 * expected);
  }
}

TEST_CASE("synthetic: the label is a function of the clue given the graph") {
  auto spec = TinySpec(300, 0);
  spec.n_relations = 2;
  const auto data = GenerateSynthetic(spec, 7);
  std::set<std::string> seen;
  for (const auto& words : data.clue_words) {
    for (const auto& w : words) CHECK(seen.insert(w).second);
  }
  // The clue is the word heading both entities.
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < data.train.instances.size(); ++i) {
    const auto& inst = data.train.instances[i];
    const auto& g = data.train.graphs[i];
    std::size_t head_s = 0, head_o = 1;
    for (const Edge& e : g.edges) {
      if (e.dep == inst.subj.begin) head_s = e.head;
      if (e.dep == inst.obj.begin) head_o = e.head;
    }
    REQUIRE(head_s == head_o);
    const std::string& clue = inst.tokens[head_s];
    std::size_t rel = 0;
    while (std::find(data.clue_words[rel].begin(), data.clue_words[rel].end(), clue) ==
           data.clue_words[rel].end()) {
      ++rel;
    }
    mismatches += data.relations[rel] != inst.relation;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("synthetic: mirrored pairs share tokens and differ in label") {
  const auto data = GenerateSynthetic(TinySpec(200, 0), 8);
  std::size_t pairs = 0;
  const auto& xs = data.train.instances;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (xs[i].tokens != xs[i + 1].tokens) continue;
    ++pairs;
    CHECK(xs[i].relation != xs[i + 1].relation);
    CHECK(data.train.graphs[i].edges.size() == data.train.graphs[i + 1].edges.size());
    ++i;
  }
  CHECK(pairs > 20);
}

// ---- training --------------------------------------------------------------

TEST_CASE("train: an empty epoch leaves the parameters unchanged") {
  const std::string dir = WriteTiny("empty_epoch", 10, 4);
  const auto cfg = TinyConfig(dir);
  const Dataset ds = LoadDataset(cfg);
  auto params = InitParams(EffectiveEncoder(cfg), ds.vocab.size(), ds.schema.size(), 3);
  const auto before = params;
  auto adam = InitAdam(params);
  CHECK(RunEpoch(params, adam, ds.train.items, {}, cfg) == 0.0);
  CHECK(adam.step == 0);
  for (std::size_t k = 0; k < params.Named().size(); ++k) {
    CHECK(*params.Named()[k].second == *before.Named()[k].second);
  }
}

TEST_CASE("train: loss decreases over the first three epochs") {
  const std::string dir = WriteTiny("loss50", 50, 10, 12);
  auto cfg = TinyConfig(dir);
  cfg.encoder.d = 16;
  cfg.epochs = 3;
  cfg.seeds = {1, 2, 3, 4, 5};
  const Dataset ds = LoadDataset(cfg);
  REQUIRE(ds.train.size() == 50);
  const auto report = Train(cfg, ds);
  std::size_t decreasing = 0;
  for (const auto& s : report.seeds) {
    REQUIRE(s.epoch_losses.size() == 3);
    decreasing += s.epoch_losses[0] > s.epoch_losses[1] && s.epoch_losses[1] > s.epoch_losses[2];
  }
  CHECK(decreasing >= 4);
}

TEST_CASE("train: reports are deterministic and independent of thread count") {
  const std::string dir = WriteTiny("determinism", 40, 16, 13);
  auto cfg = TinyConfig(dir);
  cfg.seeds = {3, 4, 5};
  const Dataset ds = LoadDataset(cfg);
  const std::string a = ReportToJson(Train(cfg, ds), false);
  cfg.threads = 3;
  const std::string b = ReportToJson(Train(cfg, ds), false);
  cfg.threads = 1;
  const std::string c = ReportToJson(TrainFromConfig(cfg), false);
  CHECK(b.find("\"threads\": 3") != std::string::npos);
  // Apart from the echoed thread count the documents agree.
  auto strip = [](std::string s) {
    const auto p = s.find("\"threads\":");
    return s.erase(p, s.find_first_of(",\n}", p) - p);
  };
  CHECK(strip(a) == strip(b));
  CHECK(a == c);
}

TEST_CASE("train: report summaries recompute from the seeds") {
  const std::string dir = WriteTiny("summary", 30, 12, 14);
  auto cfg = TinyConfig(dir);
  cfg.seeds = {1, 2, 3};
  const auto doc = nlohmann::json::parse(ReportToJson(TrainFromConfig(cfg)));
  std::vector<double> micro;
  for (const auto& s : doc["seeds"]) micro.push_back(s["micro_f1"]);
  REQUIRE(micro.size() == 3);
  double mean = (micro[0] + micro[1] + micro[2]) / 3;
  double var = 0;
  for (double m : micro) var += (m - mean) * (m - mean);
  CHECK(std::abs(doc["micro_f1"]["mean"].get<double>() - mean) <= 1e-12);
  CHECK(std::abs(doc["micro_f1"]["std"].get<double>() - std::sqrt(var / 2)) <= 1e-12);
  CHECK(doc["micro_f1"]["n"] == 3);
  CHECK(doc.contains("wall_time_seconds"));
  CHECK(SeedScoresFromJson(doc.dump()) == micro);

  const auto one = Summarize(std::vector<double>{0.25});
  CHECK(one.mean == 0.25);
  CHECK(one.std == 0.0);
}

TEST_CASE("train: dev split drives epoch selection") {
  const std::string dir = ScratchDir("devsel");
  auto spec = TinySpec(40, 12);
  spec.n_dev = 12;
  WriteSynthetic(GenerateSynthetic(spec, 15), spec, dir);
  auto cfg = TinyConfig(dir);
  cfg.epochs = 4;
  cfg.seeds = {1};
  const Dataset ds = LoadDataset(cfg);
  REQUIRE(ds.has_dev);
  const auto r = TrainSeed(cfg, ds, 1);
  REQUIRE(r.dev_micro_f1.size() == 4);
  const auto best = std::max_element(r.dev_micro_f1.begin(), r.dev_micro_f1.end());
  CHECK(r.best_epoch == static_cast<std::size_t>(best - r.dev_micro_f1.begin()) + 1);
}

TEST_CASE("train: a non-finite loss names the batch") {
  const std::string dir = WriteTiny("nonfinite", 8, 4);
  auto cfg = TinyConfig(dir);
  const Dataset ds = LoadDataset(cfg);
  auto params = InitParams(EffectiveEncoder(cfg), ds.vocab.size(), ds.schema.size(), 1);
  params.rel_b.Fill(1e308);
  params.rel_b(0, 0) = -1e308;
  params.rel_w.Fill(1e308);
  auto adam = InitAdam(params);
  std::vector<std::size_t> order(ds.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  try {
    RunEpoch(params, adam, ds.train.items, order, cfg);
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNumeric);
    CHECK(std::string(e.what()).find(ds.train.items[0].id) != std::string::npos);
  }
}

TEST_CASE("train: graph source none trains without a graph encoder") {
  TrainConfig cfg;
  cfg.graph_source = GraphSource::kNone;
  CHECK(EffectiveEncoder(cfg).graph_encoder == GraphEncoderKind::kNoGraph);
  cfg.graph_source = GraphSource::kRandom;
  CHECK(EffectiveEncoder(cfg).graph_encoder == GraphEncoderKind::kDagnnPlus);
}

// ---- config and checkpoints -------------------------------------------------

TEST_CASE("config: parse, defaults, unknown keys") {
  const auto cfg = ParseTrainConfig(R"({"version": 1, "encoder": {"layers": 3},
      "train": {"learning_rate": 0.01, "seeds": [7]}})");
  CHECK(cfg.encoder.layers == 3);
  CHECK(cfg.encoder.d == 32);
  CHECK(cfg.learning_rate == 0.01);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{7});
  CHECK(cfg.beta1 == 0.9);
  CHECK(cfg.beta2 == 0.999);
  CHECK(cfg.adam_epsilon == 1e-8);
  CHECK(TrainConfig{}.learning_rate == 5e-4);
  CHECK(TrainConfig{}.seeds.size() == 5);

  CHECK(CodeOf([] { ParseTrainConfig(R"({"version": 1, "lr": 1})"); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseTrainConfig(R"({"version": 1, "encoder": {"width": 4}})"); }) ==
        ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseTrainConfig(R"({"encoder": {}})"); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseTrainConfig(R"({"version": 1, "train": {"epochs": 0}})"); }) ==
        ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseTrainConfig(R"({"version": 1, "train": {"learning_rate": -1}})"); }) ==
        ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseTrainConfig(R"({"version": 1, "train": {"seeds": []}})"); }) ==
        ErrorCode::kConfig);
}

TEST_CASE("config: json round trip and relative paths") {
  auto cfg = ParseTrainConfig(R"({"version": 1, "data": {"dir": "synth"},
      "graph": {"source": "random", "random_seed": 4}, "scheme": "typed"})", "/base");
  CHECK(cfg.data.dir == "/base/synth");
  CHECK(cfg.data.InstancesPath("train") == "/base/synth/train.instances.jsonl");
  cfg.data.parser = "noisy";
  CHECK(cfg.data.GmrPath("test") == "/base/synth/test.gmr.noisy.jsonl");
  const auto again = ParseTrainConfig(TrainConfigToJson(cfg));
  CHECK(TrainConfigToJson(again) == TrainConfigToJson(cfg));
  CHECK(again.graph_source == GraphSource::kRandom);
  CHECK(again.scheme == MarkerScheme::kTypedEntityMarker);
}

TEST_CASE("config: shipped presets load") {
  const std::string dir = GMRC_CONFIG_DIR;
  const auto english = LoadTrainConfig(dir + "/plm_english.json");
  CHECK(english.learning_rate == 5e-5);
  CHECK(english.epochs == 5);
  CHECK(english.data.PronounsPath() == dir + "/pronouns_en.txt");
  const auto chinese = LoadTrainConfig(dir + "/plm_chinese.json");
  CHECK(chinese.learning_rate == 5e-5);
  CHECK(chinese.epochs == 10);
  CHECK(LoadTrainConfig(dir + "/plm_bert_large.json").learning_rate == 3e-5);
  const auto desk = LoadTrainConfig(dir + "/desk_synthetic.json");
  CHECK(desk.seeds.size() == 5);
  CHECK(LoadPronounLexicon(dir + "/pronouns_en.txt").count("themselves") == 1);
}

TEST_CASE("checkpoint round trip") {
  const std::string dir = WriteTiny("ckpt", 10, 4);
  auto cfg = TinyConfig(dir);
  cfg.encoder.graph_encoder = GraphEncoderKind::kVanillaGcn;
  cfg.seeds = {1};
  std::vector<ModelParams> params;
  const Dataset ds = LoadDataset(cfg);
  Train(cfg, ds, &params);
  REQUIRE(params.size() == 1);

  Checkpoint ck;
  ck.config = cfg;
  ck.relations = ds.schema.labels();
  ck.vocab = ds.vocab.entries();
  ck.params = params[0];
  const std::string path = dir + "/params.json";
  SaveCheckpoint(path, ck);
  const Checkpoint back = LoadCheckpoint(path);
  CHECK(back.relations == ck.relations);
  CHECK(back.vocab == ck.vocab);
  const auto a = ck.params.Named();
  const auto b = back.params.Named();
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].first == b[k].first);
    CHECK(*a[k].second == *b[k].second);
  }

  auto doc = nlohmann::json::parse(ReadFile(path));
  doc["arrays"][0]["shape"][1] = 3;
  CHECK_THROWS_AS(ParseCheckpoint(doc.dump()), Error);
}

// ---- experiments -------------------------------------------------------------

TEST_CASE("bootstrap: symmetry and dominance") {
  const std::vector<double> a = {0.71, 0.69, 0.73, 0.70, 0.72};
  CHECK(std::abs(BootstrapSignificance(a, a, 10000, 1) - 0.5) < 0.05);
  std::vector<double> b = a;
  for (double& v : b) v -= 10;
  CHECK(BootstrapSignificance(a, b, 10000, 1) < 0.01);
  CHECK(BootstrapSignificance(b, a, 10000, 1) > 0.99);
  CHECK(BootstrapSignificance(a, b, 2000, 1, BootstrapMode::kUnpaired) < 0.01);
}

TEST_CASE("bootstrap: matches an independent re-statement") {
  const std::vector<double> a = {0.712, 0.705, 0.720, 0.698, 0.711};
  const std::vector<double> b = {0.709, 0.707, 0.715, 0.702, 0.704};
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    CHECK(BootstrapSignificance(a, b, 5000, seed) == BootstrapOracle(a, b, 5000, seed));
  }
}

TEST_CASE("bootstrap: preconditions") {
  const std::vector<double> a = {1, 2, 3}, b = {1, 2}, one = {1};
  CHECK(CodeOf([&] { BootstrapSignificance(a, b); }) == ErrorCode::kContract);
  CHECK(CodeOf([&] { BootstrapSignificance(one, one, 1000, 0, BootstrapMode::kUnpaired); }) ==
        ErrorCode::kContract);
  CHECK(CodeOf([&] { BootstrapSignificance(a, a, 999); }) == ErrorCode::kContract);
  CHECK_NOTHROW(BootstrapSignificance(a, b, 1000, 0, BootstrapMode::kUnpaired));
}

TEST_CASE("sweep: layers and graph sources") {
  const std::string dir = WriteTiny("sweep", 24, 8, 16);
  auto cfg = TinyConfig(dir);
  cfg.epochs = 1;
  cfg.seeds = {1};
  const auto layers = RunSweep(cfg, SweepAxis::kLayers, {"2", "3", "4"});
  REQUIRE(layers.size() == 3);
  CHECK(layers[0].label == "layers=2");
  CHECK(layers[2].config.encoder.layers == 4);

  const auto sources = RunSweep(cfg, SweepAxis::kGraphSource, {"gmr", "random", "none"});
  REQUIRE(sources.size() == 3);
  CHECK(sources[2].params.graph_encoder_params == 0);
  CHECK(sources[1].params.graph_encoder_params == cfg.encoder.d);

  const auto parsers = RunSweep(cfg, SweepAxis::kParserSource, {"gold", "noisy"});
  REQUIRE(parsers.size() == 2);
  CHECK(parsers[1].config.data.parser == "noisy");

  CHECK(CodeOf([&] { RunSweep(cfg, SweepAxis::kLayers, {}); }) == ErrorCode::kConfig);
  CHECK(CodeOf([&] { ParseSweepAxis("width"); }) == ErrorCode::kConfig);

  const std::string out = ScratchDir("sweep_out");
  const auto paths = WriteReports(layers, out);
  CHECK(paths.size() == 3);
  const auto rows = LoadReportRows(out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].axis_value == "3");
  CHECK(rows[0].graph_encoder_params == cfg.encoder.d);
  const auto agg = nlohmann::json::parse(AggregateReports(rows));
  CHECK(agg["format"] == "gmrc-aggregate");
  CHECK(ReportTable(rows).find("layers=4") != std::string::npos);
  const std::string svg = PlotRowsSvg(rows, "depth");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}
