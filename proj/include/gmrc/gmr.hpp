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

// Word-level graph meaning representations (GMRs): ingestion from parser
// output, canonical serialization, and structural validation.

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gmrc {

enum class Framework { kUD, kDEP, kDM, kSDP, kGeneric };

const char* FrameworkName(Framework f);
// Throws ParseError listing the allowed values when `name` is unknown.
Framework ParseFramework(std::string_view name);

struct Edge {
  std::size_t head = 0;
  std::size_t dep = 0;
  std::string label;

  bool operator==(const Edge&) const = default;
};

// Tokens plus directed labeled bilexical edges. Indices are 0-based word
// positions; CoNLL-U ids are shifted on ingest.
struct WordGraph {
  std::vector<std::string> words;
  std::vector<Edge> edges;
  Framework framework = Framework::kUD;

  bool operator==(const WordGraph&) const = default;
};

struct ValidationReport {
  Framework framework = Framework::kUD;
  bool is_single_headed = true;
  bool is_acyclic = true;
  bool is_connected = true;
  std::vector<std::size_t> unattached_word_indices;
  std::vector<std::string> violations;
};

using WordPair = std::pair<std::size_t, std::size_t>;

// Parses CoNLL-U text. Only ID/FORM/HEAD/DEPREL are consulted; multiword
// ranges ("1-2") and empty nodes ("1.1") are skipped.
std::vector<WordGraph> ParseConllu(std::string_view text,
                                   Framework framework = Framework::kUD);

// Parses newline-delimited graph-interchange JSON, one graph per line.
std::vector<WordGraph> ParseGraphJsonl(std::string_view text);

// Canonical forms. SerializeConllu requires every word to have at most one
// head; the root label is written as "root".
std::string SerializeConllu(const std::vector<WordGraph>& graphs);
std::string SerializeGraphJsonl(const std::vector<WordGraph>& graphs);
std::string SerializeGraphJson(const WordGraph& graph);

// Checks the index/self-edge/duplicate invariants of WordGraph; throws
// ParseError naming the offending edge.
void CheckWellFormed(const WordGraph& g);

ValidationReport ValidateGraph(const WordGraph& g);

// Drops direction and label; duplicates collapse. Pairs are (min, max).
std::set<WordPair> ToUndirectedUntyped(const WordGraph& g);

}  // namespace gmrc
