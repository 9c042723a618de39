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

// Subword-level graphs lifted from word-level GMRs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "gmrc/gmr.hpp"
#include "gmrc/tokenize.hpp"

namespace gmrc {

enum class EdgeKind { kDependency, kSubword, kSpecial };

// "dep" | "sub" | "spec"
const char* EdgeKindTag(EdgeKind kind);

struct GraphOptions {
  bool prune_punct = false;
  bool self_loops = true;
};

// Undirected, untyped adjacency over subword positions. Every stored pair
// carries the provenance of the construct that created it.
class SubwordGraph {
 public:
  SubwordGraph() = default;
  explicit SubwordGraph(std::size_t n, bool self_loops = true);

  std::size_t n() const { return adjacency_.size(); }
  bool self_loops() const { return self_loops_; }
  void set_self_loops(bool on) { self_loops_ = on; }

  // Returns false when the pair already exists (the first provenance wins).
  bool AddEdge(std::size_t i, std::size_t j, EdgeKind kind);
  bool HasEdge(std::size_t i, std::size_t j) const;

  // Sorted neighbor list without the self-loop.
  const std::vector<std::size_t>& adjacent(std::size_t i) const {
    return adjacency_[i];
  }
  const std::map<std::pair<std::size_t, std::size_t>, EdgeKind>& provenance()
      const {
    return provenance_;
  }
  std::size_t num_edges() const { return provenance_.size(); }
  std::size_t CountEdges(EdgeKind kind) const;

  // First-subword positions of kept words; the node set dependency edges
  // live on.
  const std::vector<std::size_t>& word_nodes() const { return word_nodes_; }
  void set_word_nodes(std::vector<std::size_t> nodes);

  std::size_t collisions() const { return collisions_; }

  bool operator==(const SubwordGraph&) const = default;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::map<std::pair<std::size_t, std::size_t>, EdgeKind> provenance_;
  std::vector<std::size_t> word_nodes_;
  bool self_loops_ = true;
  std::size_t collisions_ = 0;
};

// Dependency edges join first subwords of GMR-connected words, subword edges
// join each word's first piece to its other pieces, and special edges join
// each opening marker to the entity's subwords and its closing marker.
SubwordGraph BuildSubwordGraph(const WordGraph& g, const MarkedSequence& seq,
                               const GraphOptions& options = GraphOptions{},
                               const std::string& instance_id = "");

enum class RandomPolicy { kShuffleDependency };

// Replaces dependency edges with the same number of distinct uniformly
// random pairs over word nodes. Subword and special edges are kept.
SubwordGraph RandomizeGraph(const SubwordGraph& sg, std::uint64_t seed,
                            RandomPolicy policy = RandomPolicy::kShuffleDependency);

// N(i): adjacent nodes plus i itself when self-loops are on; an isolated
// node without self-loops gets {i}.
std::vector<std::size_t> Neighbors(const SubwordGraph& sg, std::size_t i);

// All neighbor lists, in node order.
std::vector<std::vector<std::size_t>> NeighborLists(const SubwordGraph& sg);

// Canonical edge list sorted by (i, j) with i < j.
std::vector<std::tuple<std::size_t, std::size_t, EdgeKind>> EdgeList(
    const SubwordGraph& sg);

std::string SerializeSubwordGraphJson(const SubwordGraph& sg,
                                      const std::string& instance_id);

}  // namespace gmrc
