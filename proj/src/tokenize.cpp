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

#include "gmrc/tokenize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "gmrc/errors.hpp"
#include "json.hpp"

namespace gmrc {
namespace {

std::string Upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool IsUtf8Continuation(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

Span ReadSpan(const nlohmann::json& v, const char* name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer()) {
    Fail(ErrorCode::kParse, std::string("\"") + name + "\" must be [int,int]");
  }
  const long long b = v[0].get<long long>();
  const long long e = v[1].get<long long>();
  if (b < 0 || e < 0) {
    Fail(ErrorCode::kSchema, std::string("negative index in \"") + name + "\"");
  }
  return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

std::optional<std::string> ReadOptionalString(const nlohmann::json& obj,
                                              const char* name) {
  if (!obj.contains(name) || obj.at(name).is_null()) return std::nullopt;
  if (!obj.at(name).is_string()) {
    Fail(ErrorCode::kParse, std::string("\"") + name + "\" must be a string");
  }
  return obj.at(name).get<std::string>();
}

}  // namespace

void CheckInstance(const RcInstance& inst) {
  const std::size_t n = inst.tokens.size();
  for (const auto& [name, span] : {std::pair{"subject", inst.subj},
                                   std::pair{"object", inst.obj}}) {
    if (span.begin >= span.end || span.end > n) {
      Fail(ErrorCode::kSchema, "instance " + inst.id + ": " + name + " span [" +
                                   std::to_string(span.begin) + "," +
                                   std::to_string(span.end) +
                                   ") is empty or out of range");
    }
  }
  const bool disjoint =
      inst.subj.end <= inst.obj.begin || inst.obj.end <= inst.subj.begin;
  if (!disjoint && !(inst.subj == inst.obj)) {
    Fail(ErrorCode::kSchema,
         "instance " + inst.id + ": subject and object spans partially overlap");
  }
}

std::vector<RcInstance> ParseInstancesJsonl(std::string_view text) {
  std::vector<RcInstance> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      for (const char* field : {"id", "tokens", "subj", "obj", "relation"}) {
        if (!obj.contains(field)) {
          Fail(ErrorCode::kParse, std::string("missing field \"") + field + "\"");
        }
      }
      RcInstance inst;
      inst.id = obj.at("id").get<std::string>();
      inst.tokens = obj.at("tokens").get<std::vector<std::string>>();
      inst.subj = ReadSpan(obj.at("subj"), "subj");
      inst.obj = ReadSpan(obj.at("obj"), "obj");
      inst.subj_type = ReadOptionalString(obj, "subj_type");
      inst.obj_type = ReadOptionalString(obj, "obj_type");
      inst.relation = obj.at("relation").get<std::string>();
      CheckInstance(inst);
      out.push_back(std::move(inst));
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      Fail(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string SerializeInstanceJson(const RcInstance& inst) {
  nlohmann::ordered_json obj;
  obj["id"] = inst.id;
  obj["tokens"] = inst.tokens;
  obj["subj"] = {inst.subj.begin, inst.subj.end};
  obj["obj"] = {inst.obj.begin, inst.obj.end};
  obj["subj_type"] = inst.subj_type ? nlohmann::ordered_json(*inst.subj_type)
                                    : nlohmann::ordered_json(nullptr);
  obj["obj_type"] = inst.obj_type ? nlohmann::ordered_json(*inst.obj_type)
                                  : nlohmann::ordered_json(nullptr);
  obj["relation"] = inst.relation;
  return obj.dump();
}

MarkerScheme ParseMarkerScheme(std::string_view name) {
  if (name == "entity") return MarkerScheme::kEntityMarker;
  if (name == "typed") return MarkerScheme::kTypedEntityMarker;
  Fail(ErrorCode::kConfig,
       "unknown marker scheme \"" + std::string(name) + "\"; use entity|typed");
}

const char* MarkerSchemeName(MarkerScheme scheme) {
  return scheme == MarkerScheme::kEntityMarker ? "entity" : "typed";
}

MarkerStrings MarkersFor(MarkerScheme scheme,
                         const std::optional<std::string>& subj_type,
                         const std::optional<std::string>& obj_type) {
  if (scheme == MarkerScheme::kEntityMarker) {
    return {"[SUBJ]", "[/SUBJ]", "[OBJ]", "[/OBJ]"};
  }
  if (!subj_type || !obj_type) {
    Fail(ErrorCode::kConfig,
         "typed entity markers require both subject and object types");
  }
  const std::string s = Upper(*subj_type);
  const std::string o = Upper(*obj_type);
  return {"[SUBJ-" + s + "]", "[/SUBJ-" + s + "]", "[OBJ-" + o + "]",
          "[/OBJ-" + o + "]"};
}

std::vector<std::string> DefaultMarkerTokens() {
  return {"[SUBJ]", "[/SUBJ]", "[OBJ]", "[/OBJ]"};
}

Vocab Vocab::FromEntries(std::vector<std::string> entries,
                         const Options& options) {
  Vocab v;
  v.prefix_ = options.continuation_prefix;
  v.unk_ = options.unk_token;
  v.pad_ = options.pad_token;
  v.specials_ = options.special_tokens;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!v.index_.emplace(entries[i], static_cast<std::int32_t>(i)).second) {
      Fail(ErrorCode::kVocab, "duplicate vocab entry \"" + entries[i] +
                                  "\" at line " + std::to_string(i + 1));
    }
  }
  v.entries_ = std::move(entries);
  auto ensure = [&v](const std::string& tok) {
    if (v.index_.count(tok)) return;
    v.index_.emplace(tok, static_cast<std::int32_t>(v.entries_.size()));
    v.entries_.push_back(tok);
  };
  ensure(v.unk_);
  ensure(v.pad_);
  for (const auto& s : v.specials_) ensure(s);
  v.unk_id_ = v.index_.at(v.unk_);
  return v;
}

std::optional<std::int32_t> Vocab::Find(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Vocab::IsSpecial(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= entries_.size()) return false;
  return std::find(specials_.begin(), specials_.end(), entries_[id]) !=
         specials_.end();
}

std::string Vocab::Serialize() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e;
    out += '\n';
  }
  return out;
}

Vocab ParseVocab(std::string_view text, const Vocab::Options& options) {
  std::vector<std::string> entries;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    entries.emplace_back(line);
    start = end + 1;
  }
  while (!entries.empty() && entries.back().empty()) entries.pop_back();
  if (entries.empty()) Fail(ErrorCode::kVocab, "vocab file is empty");
  return Vocab::FromEntries(std::move(entries), options);
}

Vocab LoadVocab(const std::string& path, const Vocab::Options& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open vocab file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseVocab(buf.str(), options);
}

MarkedTokens InsertMarkers(const RcInstance& inst, MarkerScheme scheme) {
  CheckInstance(inst);
  const MarkerStrings m = MarkersFor(scheme, inst.subj_type, inst.obj_type);
  MarkedTokens out;
  out.num_words = inst.tokens.size();
  auto push = [&out](const std::string& tok, std::size_t word) {
    out.tokens.push_back(tok);
    out.word_of_token.push_back(word);
  };
  for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
    // Subject markers sit outside object markers when spans coincide.
    if (inst.subj.begin == i) {
      out.subj.begin = out.tokens.size();
      push(m.subj_open, kMarker);
    }
    if (inst.obj.begin == i) {
      out.obj.begin = out.tokens.size();
      push(m.obj_open, kMarker);
    }
    push(inst.tokens[i], i);
    if (inst.obj.end == i + 1) {
      push(m.obj_close, kMarker);
      out.obj.end = out.tokens.size();
    }
    if (inst.subj.end == i + 1) {
      push(m.subj_close, kMarker);
      out.subj.end = out.tokens.size();
    }
  }
  return out;
}

std::vector<std::int32_t> SplitWord(std::string_view word, const Vocab& vocab) {
  std::vector<std::int32_t> pieces;
  std::size_t start = 0;
  std::string candidate;
  while (start < word.size()) {
    std::optional<std::int32_t> match;
    std::size_t match_end = start;
    for (std::size_t end = word.size(); end > start; --end) {
      if (end < word.size() && IsUtf8Continuation(word[end])) continue;
      candidate.clear();
      if (start > 0) candidate = vocab.continuation_prefix();
      candidate.append(word.substr(start, end - start));
      if (auto id = vocab.Find(candidate)) {
        match = id;
        match_end = end;
        break;
      }
    }
    if (!match) {
      pieces.push_back(vocab.unk_id());
      break;
    }
    pieces.push_back(*match);
    start = match_end;
  }
  if (pieces.empty()) pieces.push_back(vocab.unk_id());
  return pieces;
}

MarkedSequence Tokenize(const MarkedTokens& marked, const Vocab& vocab,
                        std::size_t max_length) {
  if (marked.tokens.empty()) {
    Fail(ErrorCode::kContract, "cannot tokenize an empty token sequence");
  }
  MarkedSequence seq;
  seq.source_words = marked.num_words;
  seq.first_subword_of_word.assign(marked.num_words, kMarker);
  bool subj_words_open = false;
  bool obj_words_open = false;
  for (std::size_t t = 0; t < marked.tokens.size(); ++t) {
    const std::string& tok = marked.tokens[t];
    const std::size_t word = marked.word_of_token[t];
    if (word == kMarker) {
      auto id = vocab.Find(tok);
      if (!id) Fail(ErrorCode::kVocab, "marker " + tok + " is not in the vocab");
      const std::size_t pos = seq.subword_ids.size();
      if (t == marked.subj.begin) seq.subj_anchor = pos;
      if (t + 1 == marked.subj.end) seq.subj_close = pos;
      if (t == marked.obj.begin) seq.obj_anchor = pos;
      if (t + 1 == marked.obj.end) seq.obj_close = pos;
      seq.subword_ids.push_back(*id);
      seq.surface.push_back(tok);
      seq.word_of_subword.push_back(kMarker);
      continue;
    }
    if (marked.subj.contains(t)) {
      if (!subj_words_open) seq.subj_words.begin = word;
      subj_words_open = true;
      seq.subj_words.end = word + 1;
    }
    if (marked.obj.contains(t)) {
      if (!obj_words_open) seq.obj_words.begin = word;
      obj_words_open = true;
      seq.obj_words.end = word + 1;
    }
    seq.first_subword_of_word[word] = seq.subword_ids.size();
    for (std::int32_t id : SplitWord(tok, vocab)) {
      seq.subword_ids.push_back(id);
      seq.surface.push_back(vocab.entries()[id]);
      seq.word_of_subword.push_back(word);
    }
  }

  if (seq.n() > max_length) {
    const std::size_t last_marker =
        std::max({seq.subj_anchor, seq.subj_close, seq.obj_anchor, seq.obj_close});
    if (last_marker >= max_length) {
      Fail(ErrorCode::kInstanceRejected,
           "sequence of " + std::to_string(seq.n()) +
               " subwords cannot be truncated to " + std::to_string(max_length) +
               " without dropping an entity marker");
    }
    // Cut on a word boundary so every kept word keeps all of its pieces.
    std::size_t cut = max_length;
    while (cut > 0 && seq.word_of_subword[cut] != kMarker &&
           seq.word_of_subword[cut] == seq.word_of_subword[cut - 1]) {
      --cut;
    }
    std::size_t kept_words = 0;
    for (std::size_t i = 0; i < cut; ++i) {
      if (seq.word_of_subword[i] != kMarker) {
        kept_words = std::max(kept_words, seq.word_of_subword[i] + 1);
      }
    }
    seq.subword_ids.resize(cut);
    seq.surface.resize(cut);
    seq.word_of_subword.resize(cut);
    seq.first_subword_of_word.resize(kept_words);
  }
  return seq;
}

std::string Detokenize(const MarkedSequence& seq, std::size_t word,
                       std::string_view prefix) {
  std::string out;
  for (std::size_t i = 0; i < seq.n(); ++i) {
    if (seq.word_of_subword[i] != word) continue;
    std::string_view piece = seq.surface[i];
    if (i != seq.first_subword_of_word[word] && piece.starts_with(prefix)) {
      piece.remove_prefix(prefix.size());
    }
    out.append(piece);
  }
  return out;
}

}  // namespace gmrc
