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

// Synthetic clue-word relation benchmark.
//
// Each sentence holds a subject word, an object word and a clue word whose
// relation vocabulary determines the label. The clue heads both entities in
// a UD-style tree under a filler root, so it sits on the word-level path
// between them while being at least `distance_min` tokens away from each in
// sequence order. A fraction of sentences also carries a distractor clue
// from a different relation, attached to the same root and heading two
// filler leaves. Those sentences are emitted as mirrored pairs that share
// the token sequence but swap clue and distractor roles in the tree (and
// therefore the label). The sequence alone cannot separate a mirrored pair.
// The graph can, but only through the clue's adjacency to the entities:
// clue and distractor have the same degree.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gmrc/gmr.hpp"
#include "gmrc/tokenize.hpp"

namespace gmrc {

struct SyntheticSpec {
  std::size_t n_train = 2000;
  std::size_t n_dev = 0;
  std::size_t n_test = 500;
  std::size_t n_relations = 5;
  std::size_t sentence_len = 24;
  std::size_t distance_min = 8;
  double distractor_rate = 0.5;
  double pronoun_rate = 0.1;
  std::size_t clue_words_per_relation = 8;
  std::size_t filler_words = 300;
  // Probability that a noisy-parser graph reattaches a word.
  double parser_noise = 0.25;
};

// Unknown keys are rejected; missing keys keep their defaults.
SyntheticSpec ParseSyntheticSpec(std::string_view json_text);
std::string SyntheticSpecToJson(const SyntheticSpec& spec);

// Throws ConfigError when the spec cannot be realized.
void CheckSyntheticSpec(const SyntheticSpec& spec);

struct SyntheticSplit {
  std::vector<RcInstance> instances;
  std::vector<WordGraph> graphs;        // gold trees
  std::vector<WordGraph> noisy_graphs;  // perturbed trees ("noisy" parser)
};

struct SyntheticData {
  std::vector<std::string> vocab;
  std::vector<std::vector<std::string>> clue_words;  // per relation
  std::vector<std::string> relations;
  SyntheticSplit train, dev, test;
};

SyntheticData GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Writes vocab.txt, pronouns.txt, spec.json and, for each non-empty split,
// <split>.instances.jsonl, <split>.gmr.jsonl and <split>.gmr.noisy.jsonl.
void WriteSynthetic(const SyntheticData& data, const SyntheticSpec& spec,
                    const std::string& dir);

// English personal, possessive and reflexive pronouns.
std::vector<std::string> DefaultPronounLexicon();

}  // namespace gmrc
