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

// Loading RC instances with their GMRs into model-ready items.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmrc/config.hpp"
#include "gmrc/gmr.hpp"
#include "gmrc/graph.hpp"
#include "gmrc/rc_model.hpp"
#include "gmrc/tokenize.hpp"

namespace gmrc {

struct PreparedItem {
  std::string id;
  MarkedSequence seq;
  SubwordGraph graph;
  std::size_t gold = 0;
  bool pronoun = false;  // Pronoun group membership
};

struct PreparedSplit {
  std::vector<PreparedItem> items;
  std::vector<std::string> rejected_ids;  // failed the truncation rule

  std::size_t size() const { return items.size(); }
  std::size_t n_rejected() const { return rejected_ids.size(); }
};

struct PrepareOptions {
  MarkerScheme scheme = MarkerScheme::kEntityMarker;
  std::size_t max_length = kDefaultMaxLength;
  GraphOptions graph;
  GraphSource source = GraphSource::kGmr;
  std::uint64_t random_graph_seed = 17;
  std::set<std::string> pronouns;
};

PrepareOptions PrepareOptionsFor(const TrainConfig& cfg,
                                 std::set<std::string> pronouns);

// Instance i pairs with graph i. A missing graph or a graph whose words
// differ from the instance tokens is a JoinError naming the instance ids.
void CheckJoin(const std::vector<RcInstance>& instances,
               const std::vector<WordGraph>& graphs);

PreparedSplit PrepareSplit(const std::vector<RcInstance>& instances,
                           const std::vector<WordGraph>& graphs, const Vocab& vocab,
                           const RelationSchema& schema, const PrepareOptions& options);

// Mention/Pronoun partition: an instance is in the pronoun group iff any
// word of either entity span, lowercased, is in the lexicon. Returns the
// index lists (mention, pronoun).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> GroupSplit(
    const std::vector<RcInstance>& instances, const std::set<std::string>& lexicon);
bool IsPronounInstance(const RcInstance& inst, const std::set<std::string>& lexicon);

std::set<std::string> ParsePronounLexicon(std::string_view text);
// Built-in English lexicon when `path` is empty.
std::set<std::string> LoadPronounLexicon(const std::string& path);

std::vector<RcInstance> LoadInstances(const std::string& path);
// CoNLL-U when the path ends in .conllu, graph JSONL otherwise.
std::vector<WordGraph> LoadGraphs(const std::string& path);
std::string ReadFile(const std::string& path);

// Vocab options with the typed markers needed by `instances` added.
Vocab::Options VocabOptionsFor(MarkerScheme scheme,
                               const std::vector<const std::vector<RcInstance>*>& splits);

struct Dataset {
  Vocab vocab;
  RelationSchema schema;
  PreparedSplit train, dev, test;
  bool has_dev = false;
};

// Loads every split named by cfg.data. The schema is the sorted union of
// gold labels (plus the NA label) unless `schema` is supplied; likewise
// `vocab_entries` replaces the vocab file.
Dataset LoadDataset(const TrainConfig& cfg,
                    const std::optional<RelationSchema>& schema = std::nullopt,
                    const std::optional<std::vector<std::string>>& vocab_entries =
                        std::nullopt);

}  // namespace gmrc
