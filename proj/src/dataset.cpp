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

#include "gmrc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "gmrc/errors.hpp"
#include "gmrc/rng.hpp"
#include "gmrc/synthetic.hpp"

namespace gmrc {
namespace {

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string IdList(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<RcInstance> LoadInstances(const std::string& path) {
  return ParseInstancesJsonl(ReadFile(path));
}

std::vector<WordGraph> LoadGraphs(const std::string& path) {
  const std::string text = ReadFile(path);
  if (EndsWith(path, ".conllu")) return ParseConllu(text);
  return ParseGraphJsonl(text);
}

std::set<std::string> ParsePronounLexicon(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    out.insert(Lower(line));
  }
  return out;
}

std::set<std::string> LoadPronounLexicon(const std::string& path) {
  if (path.empty()) {
    const auto words = DefaultPronounLexicon();
    return {words.begin(), words.end()};
  }
  auto lexicon = ParsePronounLexicon(ReadFile(path));
  if (lexicon.empty()) Fail(ErrorCode::kConfig, "pronoun lexicon " + path + " is empty");
  return lexicon;
}

bool IsPronounInstance(const RcInstance& inst, const std::set<std::string>& lexicon) {
  for (const Span& span : {inst.subj, inst.obj}) {
    for (std::size_t w = span.begin; w < span.end && w < inst.tokens.size(); ++w) {
      if (lexicon.count(Lower(inst.tokens[w]))) return true;
    }
  }
  return false;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> GroupSplit(
    const std::vector<RcInstance>& instances, const std::set<std::string>& lexicon) {
  if (lexicon.empty()) Fail(ErrorCode::kContract, "pronoun lexicon is empty");
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    (IsPronounInstance(instances[i], lexicon) ? out.second : out.first).push_back(i);
  }
  return out;
}

void CheckJoin(const std::vector<RcInstance>& instances,
               const std::vector<WordGraph>& graphs) {
  std::vector<std::string> missing, mismatched;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (i >= graphs.size()) {
      missing.push_back(instances[i].id);
    } else if (graphs[i].words != instances[i].tokens) {
      mismatched.push_back(instances[i].id);
    }
  }
  if (!missing.empty()) {
    Fail(ErrorCode::kJoin, "no graph for instances: " + IdList(missing));
  }
  if (!mismatched.empty()) {
    Fail(ErrorCode::kJoin, "graph words differ from instance tokens for: " + IdList(mismatched));
  }
  if (graphs.size() > instances.size()) {
    Fail(ErrorCode::kJoin, std::to_string(graphs.size() - instances.size()) +
                               " graphs have no matching instance");
  }
}

PrepareOptions PrepareOptionsFor(const TrainConfig& cfg, std::set<std::string> pronouns) {
  PrepareOptions o;
  o.scheme = cfg.scheme;
  o.max_length = cfg.max_length;
  o.graph.prune_punct = cfg.prune_punct;
  o.graph.self_loops = cfg.encoder.self_loops;
  o.source = cfg.graph_source;
  o.random_graph_seed = cfg.random_graph_seed;
  o.pronouns = std::move(pronouns);
  return o;
}

PreparedSplit PrepareSplit(const std::vector<RcInstance>& instances,
                           const std::vector<WordGraph>& graphs, const Vocab& vocab,
                           const RelationSchema& schema, const PrepareOptions& options) {
  if (options.source != GraphSource::kNone) CheckJoin(instances, graphs);
  PreparedSplit out;
  out.items.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const RcInstance& inst = instances[i];
    PreparedItem item;
    item.id = inst.id;
    item.gold = schema.Index(inst.relation);
    item.pronoun = !options.pronouns.empty() && IsPronounInstance(inst, options.pronouns);
    try {
      item.seq = Tokenize(InsertMarkers(inst, options.scheme), vocab, options.max_length);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInstanceRejected) throw;
      out.rejected_ids.push_back(inst.id);
      continue;
    }
    if (options.source == GraphSource::kNone) {
      WordGraph bare;
      bare.words = inst.tokens;
      item.graph = BuildSubwordGraph(bare, item.seq, options.graph, inst.id);
    } else {
      item.graph = BuildSubwordGraph(graphs[i], item.seq, options.graph, inst.id);
      if (options.source == GraphSource::kRandom) {
        item.graph = RandomizeGraph(item.graph, MixSeed(options.random_graph_seed, i));
      }
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

Vocab::Options VocabOptionsFor(MarkerScheme scheme,
                               const std::vector<const std::vector<RcInstance>*>& splits) {
  Vocab::Options options;
  if (scheme != MarkerScheme::kTypedEntityMarker) return options;
  std::set<std::string> seen(options.special_tokens.begin(), options.special_tokens.end());
  for (const auto* split : splits) {
    for (const RcInstance& inst : *split) {
      const MarkerStrings m = MarkersFor(scheme, inst.subj_type, inst.obj_type);
      for (const std::string& s : {m.subj_open, m.subj_close, m.obj_open, m.obj_close}) {
        if (seen.insert(s).second) options.special_tokens.push_back(s);
      }
    }
  }
  return options;
}

Dataset LoadDataset(const TrainConfig& cfg, const std::optional<RelationSchema>& schema,
                    const std::optional<std::vector<std::string>>& vocab_entries) {
  const DataConfig& d = cfg.data;
  std::vector<RcInstance> train, dev, test;
  if (d.HasSplit("train")) train = LoadInstances(d.InstancesPath("train"));
  const bool has_dev = d.HasSplit("dev");
  if (has_dev) dev = LoadInstances(d.InstancesPath("dev"));
  if (!d.HasSplit("test")) {
    Fail(ErrorCode::kIo, "no test split found at \"" + d.InstancesPath("test") + "\"");
  }
  test = LoadInstances(d.InstancesPath("test"));

  Dataset ds;
  ds.has_dev = has_dev;
  const Vocab::Options vopts = VocabOptionsFor(cfg.scheme, {&train, &dev, &test});
  if (vocab_entries) {
    ds.vocab = Vocab::FromEntries(*vocab_entries, vopts);
  } else {
    if (d.VocabPath().empty()) Fail(ErrorCode::kConfig, "no vocab file configured");
    ds.vocab = LoadVocab(d.VocabPath(), vopts);
  }

  if (schema) {
    ds.schema = *schema;
  } else {
    std::set<std::string> labels;
    for (const auto* split : {&train, &dev, &test}) {
      for (const RcInstance& inst : *split) labels.insert(inst.relation);
    }
    if (cfg.na_label) labels.insert(*cfg.na_label);
    ds.schema = RelationSchema({labels.begin(), labels.end()}, cfg.na_label);
  }

  const PrepareOptions options = PrepareOptionsFor(cfg, LoadPronounLexicon(d.PronounsPath()));
  auto graphs_for = [&](const char* split) {
    if (cfg.graph_source == GraphSource::kNone) return std::vector<WordGraph>{};
    const std::string path = d.GmrPath(split);
    if (path.empty()) Fail(ErrorCode::kConfig, std::string("no GMR file for split ") + split);
    return LoadGraphs(path);
  };
  if (!train.empty()) ds.train = PrepareSplit(train, graphs_for("train"), ds.vocab, ds.schema, options);
  if (has_dev) ds.dev = PrepareSplit(dev, graphs_for("dev"), ds.vocab, ds.schema, options);
  ds.test = PrepareSplit(test, graphs_for("test"), ds.vocab, ds.schema, options);
  return ds;
}

}  // namespace gmrc
