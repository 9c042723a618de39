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

#include "gmrc/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "gmrc/errors.hpp"
#include "gmrc/rng.hpp"
#include "json.hpp"

namespace gmrc {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::size_t kEntityStems = 60;
constexpr std::size_t kSuffixes = 20;
constexpr double kCompoundFillerRate = 0.2;

const std::vector<std::string> kFillerLabels = {"amod", "advmod", "nmod", "compound",
                                                "det",  "dep",    "case", "mark"};
const std::vector<std::string> kSubjectTypes = {"PERSON", "ORG"};
const std::vector<std::string> kObjectTypes = {"PERSON", "ORG", "LOC", "DATE"};
const std::vector<std::string> kSubjectPronouns = {"he", "she", "they", "it"};

std::string Syllable(Rng& rng) {
  std::string s;
  s += kConsonants[rng.Uniform(kConsonants.size())];
  s += kVowels[rng.Uniform(kVowels.size())];
  return s;
}

// Draws `count` distinct words of `syllables` syllables (plus `tail`) that do
// not collide with anything in `taken`.
std::vector<std::string> DrawWords(Rng& rng, std::size_t count, std::size_t syllables,
                                   const std::string& tail, std::set<std::string>& taken) {
  std::vector<std::string> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000000) Fail(ErrorCode::kConfig, "word space exhausted");
    std::string w;
    for (std::size_t i = 0; i < syllables; ++i) w += Syllable(rng);
    w += tail;
    if (taken.insert(w).second) out.push_back(w);
  }
  return out;
}

struct Lexicon {
  std::vector<std::string> fillers;
  std::vector<std::vector<std::string>> clues;
  std::vector<std::string> stems;
  std::vector<std::string> suffixes;  // without the continuation prefix
  std::set<std::string> entries;
};

std::string Pick(Rng& rng, const std::vector<std::string>& v) {
  return v[rng.Uniform(v.size())];
}

// Composite word `head + tail` that is not itself a vocab entry.
std::string Compose(Rng& rng, const std::vector<std::string>& heads, const Lexicon& lex) {
  while (true) {
    std::string w = Pick(rng, heads) + Pick(rng, lex.suffixes);
    if (!lex.entries.count(w)) return w;
  }
}

struct SentenceDraft {
  std::vector<std::string> words;
  std::size_t subj = 0, obj = 0, clue = 0, distractor = 0;
  bool has_distractor = false;
  std::size_t relation = 0, distractor_relation = 0;
  std::string subj_type, obj_type;
  std::vector<Edge> edges;
};

SentenceDraft DraftSentence(Rng& rng, const SyntheticSpec& spec, const Lexicon& lex,
                            bool with_distractor) {
  const std::size_t content = spec.sentence_len - 1;  // last slot is "."
  SentenceDraft s;
  s.has_distractor = with_distractor;
  std::vector<std::size_t> candidates;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt > 10000) Fail(ErrorCode::kConfig, "cannot place clue words; spec infeasible");
    s.subj = rng.Uniform(content);
    s.obj = rng.Uniform(content);
    if (s.subj == s.obj) continue;
    candidates.clear();
    for (std::size_t p = 0; p < content; ++p) {
      const std::size_t ds = p > s.subj ? p - s.subj : s.subj - p;
      const std::size_t dobj = p > s.obj ? p - s.obj : s.obj - p;
      if (ds >= spec.distance_min && dobj >= spec.distance_min) candidates.push_back(p);
    }
    if (candidates.size() >= (with_distractor ? 2u : 1u)) break;
  }
  const std::size_t ci = rng.Uniform(candidates.size());
  s.clue = candidates[ci];
  if (with_distractor) {
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(ci));
    s.distractor = candidates[rng.Uniform(candidates.size())];
  }

  s.relation = rng.Uniform(spec.n_relations);
  if (with_distractor) {
    s.distractor_relation = rng.Uniform(spec.n_relations - 1);
    if (s.distractor_relation >= s.relation) ++s.distractor_relation;
  }

  s.words.resize(spec.sentence_len);
  for (std::size_t p = 0; p < content; ++p) {
    s.words[p] = rng.Bernoulli(kCompoundFillerRate) ? Compose(rng, lex.fillers, lex)
                                                     : Pick(rng, lex.fillers);
  }
  s.words[content] = ".";
  const bool pronoun = rng.Bernoulli(spec.pronoun_rate);
  s.words[s.subj] = pronoun ? Pick(rng, kSubjectPronouns) : Compose(rng, lex.stems, lex);
  s.words[s.obj] = Compose(rng, lex.stems, lex);
  s.words[s.clue] = Pick(rng, lex.clues[s.relation]);
  if (with_distractor) s.words[s.distractor] = Pick(rng, lex.clues[s.distractor_relation]);
  s.subj_type = pronoun ? "PERSON" : Pick(rng, kSubjectTypes);
  s.obj_type = Pick(rng, kObjectTypes);

  // Tree: a filler root heads the clue, which heads both entities. The
  // distractor hangs off the same root and heads two leaf fillers, so clue
  // and distractor have equal degree and differ only in what they attach.
  std::vector<std::size_t> fillers;
  for (std::size_t p = 0; p < content; ++p) {
    if (p == s.subj || p == s.obj || p == s.clue) continue;
    if (with_distractor && p == s.distractor) continue;
    fillers.push_back(p);
  }
  rng.Shuffle(fillers);
  std::size_t next = 0;
  const bool has_root = !fillers.empty();
  const std::size_t root = has_root ? fillers[next++] : s.clue;
  if (has_root) s.edges.push_back({root, s.clue, "advcl"});
  s.edges.push_back({s.clue, s.subj, "nsubj"});
  s.edges.push_back({s.clue, s.obj, "obj"});
  s.edges.push_back({root, content, "punct"});
  if (with_distractor) {
    s.edges.push_back({root, s.distractor, "advcl"});
    for (int c = 0; c < 2 && next < fillers.size(); ++c) {
      s.edges.push_back({s.distractor, fillers[next++], c == 0 ? "nsubj" : "obj"});
    }
  }
  std::vector<std::size_t> attached{root};
  for (; next < fillers.size(); ++next) {
    const std::size_t head = attached[rng.Uniform(attached.size())];
    s.edges.push_back({head, fillers[next], Pick(rng, kFillerLabels)});
    attached.push_back(fillers[next]);
  }
  std::sort(s.edges.begin(), s.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.dep, a.head) < std::tie(b.dep, b.head);
  });
  return s;
}

RcInstance MakeInstance(const SentenceDraft& s, const std::string& id,
                        const std::string& relation) {
  RcInstance inst;
  inst.id = id;
  inst.tokens = s.words;
  inst.subj = {s.subj, s.subj + 1};
  inst.obj = {s.obj, s.obj + 1};
  inst.subj_type = s.subj_type;
  inst.obj_type = s.obj_type;
  inst.relation = relation;
  return inst;
}

// Reattaches words to random non-descendants; the result stays a tree.
WordGraph PerturbTree(const WordGraph& g, double noise, Rng& rng) {
  WordGraph out = g;
  const std::size_t n = g.words.size();
  for (Edge& e : out.edges) {
    if (!rng.Bernoulli(noise)) continue;
    std::vector<std::vector<std::size_t>> children(n);
    for (const Edge& x : out.edges) children[x.head].push_back(x.dep);
    std::vector<bool> below(n, false);
    std::vector<std::size_t> stack{e.dep};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      below[u] = true;
      for (std::size_t c : children[u]) stack.push_back(c);
    }
    std::vector<std::size_t> options;
    for (std::size_t w = 0; w < n; ++w) {
      if (!below[w]) options.push_back(w);
    }
    if (!options.empty()) e.head = options[rng.Uniform(options.size())];
  }
  return out;
}

void GenerateSplit(Rng& rng, const SyntheticSpec& spec, const Lexicon& lex,
                   const std::vector<std::string>& relations, std::size_t count,
                   const std::string& name, SyntheticSplit* split) {
  auto next_id = [&]() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%05zu", name.c_str(), split->instances.size());
    return std::string(buf);
  };
  while (split->instances.size() < count) {
    const bool paired = split->instances.size() + 2 <= count &&
                        rng.Bernoulli(spec.distractor_rate);
    const SentenceDraft s = DraftSentence(rng, spec, lex, paired);
    WordGraph g;
    g.words = s.words;
    g.edges = s.edges;
    g.framework = Framework::kUD;
    split->instances.push_back(MakeInstance(s, next_id(), relations[s.relation]));
    split->graphs.push_back(g);
    if (!paired) continue;
    // Mirror: same tokens, clue and distractor swap places in the tree.
    WordGraph m = g;
    auto swap_role = [&s](std::size_t p) {
      return p == s.clue ? s.distractor : p == s.distractor ? s.clue : p;
    };
    for (Edge& e : m.edges) {
      e.head = swap_role(e.head);
      e.dep = swap_role(e.dep);
    }
    std::sort(m.edges.begin(), m.edges.end(), [](const Edge& a, const Edge& b) {
      return std::tie(a.dep, a.head) < std::tie(b.dep, b.head);
    });
    split->instances.push_back(
        MakeInstance(s, next_id(), relations[s.distractor_relation]));
    split->graphs.push_back(std::move(m));
  }
  for (const WordGraph& g : split->graphs) {
    split->noisy_graphs.push_back(PerturbTree(g, spec.parser_noise, rng));
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

}  // namespace

std::vector<std::string> DefaultPronounLexicon() {
  return {"i",      "me",       "my",        "mine",       "myself",  "you",
          "your",   "yours",    "yourself",  "yourselves", "he",      "him",
          "his",    "himself",  "she",       "her",        "hers",    "herself",
          "it",     "its",      "itself",    "we",         "us",      "our",
          "ours",   "ourselves", "they",     "them",       "their",   "theirs",
          "themselves"};
}

void CheckSyntheticSpec(const SyntheticSpec& spec) {
  if (spec.n_relations < 2) Fail(ErrorCode::kConfig, "n_relations must be >= 2");
  if (spec.sentence_len < spec.distance_min + 4) {
    Fail(ErrorCode::kConfig, "sentence_len must be >= distance_min + 4");
  }
  if (spec.distance_min < 1) Fail(ErrorCode::kConfig, "distance_min must be >= 1");
  if (spec.clue_words_per_relation < 1 || spec.filler_words < 1) {
    Fail(ErrorCode::kConfig, "clue and filler vocabularies must be non-empty");
  }
  for (double p : {spec.distractor_rate, spec.pronoun_rate, spec.parser_noise}) {
    if (!(p >= 0.0 && p <= 1.0)) Fail(ErrorCode::kConfig, "rates must lie in [0, 1]");
  }
}

SyntheticSpec ParseSyntheticSpec(std::string_view json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("synthetic spec is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) Fail(ErrorCode::kConfig, "synthetic spec must be an object");
  SyntheticSpec spec;
  for (const auto& [key, value] : root.items()) {
    try {
      if (key == "n_train") spec.n_train = value.get<std::size_t>();
      else if (key == "n_dev") spec.n_dev = value.get<std::size_t>();
      else if (key == "n_test") spec.n_test = value.get<std::size_t>();
      else if (key == "n_relations") spec.n_relations = value.get<std::size_t>();
      else if (key == "sentence_len") spec.sentence_len = value.get<std::size_t>();
      else if (key == "distance_min") spec.distance_min = value.get<std::size_t>();
      else if (key == "distractor_rate") spec.distractor_rate = value.get<double>();
      else if (key == "pronoun_rate") spec.pronoun_rate = value.get<double>();
      else if (key == "clue_words_per_relation") spec.clue_words_per_relation = value.get<std::size_t>();
      else if (key == "filler_words") spec.filler_words = value.get<std::size_t>();
      else if (key == "parser_noise") spec.parser_noise = value.get<double>();
      else Fail(ErrorCode::kConfig, "unknown key \"" + key + "\" in synthetic spec");
    } catch (const nlohmann::json::exception&) {
      Fail(ErrorCode::kConfig, "bad value for \"" + key + "\" in synthetic spec");
    }
  }
  CheckSyntheticSpec(spec);
  return spec;
}

std::string SyntheticSpecToJson(const SyntheticSpec& spec) {
  nlohmann::ordered_json o;
  o["n_train"] = spec.n_train;
  o["n_dev"] = spec.n_dev;
  o["n_test"] = spec.n_test;
  o["n_relations"] = spec.n_relations;
  o["sentence_len"] = spec.sentence_len;
  o["distance_min"] = spec.distance_min;
  o["distractor_rate"] = spec.distractor_rate;
  o["pronoun_rate"] = spec.pronoun_rate;
  o["clue_words_per_relation"] = spec.clue_words_per_relation;
  o["filler_words"] = spec.filler_words;
  o["parser_noise"] = spec.parser_noise;
  return o.dump(2);
}

SyntheticData GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  CheckSyntheticSpec(spec);
  Rng lex_rng(MixSeed(seed, 0));
  Lexicon lex;
  lex.entries.insert(".");
  for (const auto& p : DefaultPronounLexicon()) lex.entries.insert(p);
  lex.fillers = DrawWords(lex_rng, spec.filler_words, 2, "", lex.entries);
  for (std::size_t r = 0; r < spec.n_relations; ++r) {
    lex.clues.push_back(DrawWords(lex_rng, spec.clue_words_per_relation, 3, "x", lex.entries));
  }
  lex.stems = DrawWords(lex_rng, kEntityStems, 2, "", lex.entries);
  {
    std::set<std::string> seen;
    lex.suffixes = DrawWords(lex_rng, kSuffixes, 1, "", seen);
  }

  SyntheticData data;
  for (std::size_t r = 0; r < spec.n_relations; ++r) {
    data.relations.push_back("rel_" + std::to_string(r));
  }
  data.clue_words = lex.clues;

  auto& v = data.vocab;
  v.push_back(std::string(Vocab::kDefaultPad));
  v.push_back(std::string(Vocab::kDefaultUnk));
  for (const auto& m : DefaultMarkerTokens()) v.push_back(m);
  for (const auto& t : kObjectTypes) {
    const MarkerStrings m = MarkersFor(MarkerScheme::kTypedEntityMarker, t, t);
    for (const auto& s : {m.subj_open, m.subj_close, m.obj_open, m.obj_close}) v.push_back(s);
  }
  v.push_back(".");
  for (const auto& p : DefaultPronounLexicon()) v.push_back(p);
  v.insert(v.end(), lex.fillers.begin(), lex.fillers.end());
  for (const auto& c : lex.clues) v.insert(v.end(), c.begin(), c.end());
  v.insert(v.end(), lex.stems.begin(), lex.stems.end());
  for (const auto& s : lex.suffixes) v.push_back("##" + s);
  for (char c = 'a'; c <= 'z'; ++c) {
    const std::string letter(1, c);
    if (!lex.entries.count(letter)) v.push_back(letter);
  }
  for (char c = 'a'; c <= 'z'; ++c) {
    const std::string piece = "##" + std::string(1, c);
    if (std::find(v.begin(), v.end(), piece) == v.end()) v.push_back(piece);
  }

  Rng train_rng(MixSeed(seed, 1));
  Rng dev_rng(MixSeed(seed, 2));
  Rng test_rng(MixSeed(seed, 3));
  GenerateSplit(train_rng, spec, lex, data.relations, spec.n_train, "train", &data.train);
  GenerateSplit(dev_rng, spec, lex, data.relations, spec.n_dev, "dev", &data.dev);
  GenerateSplit(test_rng, spec, lex, data.relations, spec.n_test, "test", &data.test);
  return data;
}

void WriteSynthetic(const SyntheticData& data, const SyntheticSpec& spec,
                    const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  std::string vocab;
  for (const auto& e : data.vocab) vocab += e + "\n";
  WriteText(root / "vocab.txt", vocab);
  std::string pronouns;
  for (const auto& p : DefaultPronounLexicon()) pronouns += p + "\n";
  WriteText(root / "pronouns.txt", pronouns);
  WriteText(root / "spec.json", SyntheticSpecToJson(spec) + "\n");
  for (const auto& [name, split] : {std::pair<std::string, const SyntheticSplit*>{"train", &data.train},
                                    {"dev", &data.dev},
                                    {"test", &data.test}}) {
    if (split->instances.empty()) continue;
    std::string inst;
    for (const auto& i : split->instances) inst += SerializeInstanceJson(i) + "\n";
    WriteText(root / (name + ".instances.jsonl"), inst);
    WriteText(root / (name + ".gmr.jsonl"), SerializeGraphJsonl(split->graphs));
    WriteText(root / (name + ".gmr.noisy.jsonl"), SerializeGraphJsonl(split->noisy_graphs));
  }
}

}  // namespace gmrc
