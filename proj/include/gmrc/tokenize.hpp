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

// Entity marking and subword tokenization with a total word/subword
// alignment.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gmrc {

// Half-open word range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool operator==(const Span&) const = default;
};

struct RcInstance {
  std::string id;
  std::vector<std::string> tokens;
  Span subj;
  Span obj;
  std::optional<std::string> subj_type;
  std::optional<std::string> obj_type;
  std::string relation;
};

// Throws SchemaError for empty, out-of-range or partially overlapping spans.
void CheckInstance(const RcInstance& inst);

std::vector<RcInstance> ParseInstancesJsonl(std::string_view text);
std::string SerializeInstanceJson(const RcInstance& inst);

enum class MarkerScheme { kEntityMarker, kTypedEntityMarker };

MarkerScheme ParseMarkerScheme(std::string_view name);  // "entity" | "typed"
const char* MarkerSchemeName(MarkerScheme scheme);

struct MarkerStrings {
  std::string subj_open, subj_close, obj_open, obj_close;
};

MarkerStrings MarkersFor(MarkerScheme scheme,
                         const std::optional<std::string>& subj_type,
                         const std::optional<std::string>& obj_type);

// The four untyped markers.
std::vector<std::string> DefaultMarkerTokens();

class Vocab {
 public:
  static constexpr std::string_view kDefaultUnk = "[UNK]";
  static constexpr std::string_view kDefaultPad = "[PAD]";

  struct Options {
    std::string continuation_prefix = "##";
    std::string unk_token = std::string(kDefaultUnk);
    std::string pad_token = std::string(kDefaultPad);
    std::vector<std::string> special_tokens = DefaultMarkerTokens();
  };

  // Entries must be unique; unk, pad and special tokens are appended (in
  // that order) when absent.
  static Vocab FromEntries(std::vector<std::string> entries,
                           const Options& options);
  static Vocab FromEntries(std::vector<std::string> entries) {
    return FromEntries(std::move(entries), Options{});
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& entries() const { return entries_; }
  const std::string& continuation_prefix() const { return prefix_; }
  const std::string& unk_token() const { return unk_; }
  const std::string& pad_token() const { return pad_; }
  const std::vector<std::string>& special_tokens() const { return specials_; }

  std::optional<std::int32_t> Find(std::string_view piece) const;
  std::int32_t unk_id() const { return unk_id_; }
  bool IsSpecial(std::int32_t id) const;

  // One entry per line, in id order.
  std::string Serialize() const;

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, std::int32_t> index_;
  std::string prefix_, unk_, pad_;
  std::vector<std::string> specials_;
  std::int32_t unk_id_ = 0;
};

// Reads a one-piece-per-line file. Errors on duplicate lines or empty files.
Vocab LoadVocab(const std::string& path,
                const Vocab::Options& options = Vocab::Options{});
Vocab ParseVocab(std::string_view text,
                 const Vocab::Options& options = Vocab::Options{});

inline constexpr std::size_t kMarker = std::numeric_limits<std::size_t>::max();

// Word tokens with entity markers inserted. `word_of_token` maps each
// position to its source word or kMarker; spans include their markers.
struct MarkedTokens {
  std::vector<std::string> tokens;
  std::vector<std::size_t> word_of_token;
  Span subj;
  Span obj;
  std::size_t num_words = 0;
};

MarkedTokens InsertMarkers(const RcInstance& inst, MarkerScheme scheme);

struct MarkedSequence {
  std::vector<std::int32_t> subword_ids;
  std::vector<std::string> surface;
  std::vector<std::size_t> word_of_subword;
  std::vector<std::size_t> first_subword_of_word;
  std::size_t subj_anchor = 0;
  std::size_t subj_close = 0;
  std::size_t obj_anchor = 0;
  std::size_t obj_close = 0;
  // Entity word spans in source-word indices.
  Span subj_words;
  Span obj_words;
  // Words before truncation; first_subword_of_word covers the kept prefix.
  std::size_t source_words = 0;

  std::size_t n() const { return subword_ids.size(); }
  std::size_t kept_words() const { return first_subword_of_word.size(); }
};

inline constexpr std::size_t kDefaultMaxLength = 256;

// Greedy longest-match subword split of one word. Pieces after the first
// carry the continuation prefix; an unmatched remainder becomes unk.
std::vector<std::int32_t> SplitWord(std::string_view word, const Vocab& vocab);

// Throws InstanceRejected when the sequence exceeds max_length and
// truncation would drop any of the four markers.
MarkedSequence Tokenize(const MarkedTokens& marked, const Vocab& vocab,
                        std::size_t max_length = kDefaultMaxLength);

// Joins a word's pieces with the continuation prefix stripped.
std::string Detokenize(const MarkedSequence& seq, std::size_t word,
                       std::string_view prefix = "##");

}  // namespace gmrc
