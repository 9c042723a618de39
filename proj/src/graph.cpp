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

#include "gmrc/graph.hpp"

#include <algorithm>
#include <set>

#include "gmrc/errors.hpp"
#include "gmrc/rng.hpp"
#include "json.hpp"

namespace gmrc {

const char* EdgeKindTag(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kDependency: return "dep";
    case EdgeKind::kSubword: return "sub";
    case EdgeKind::kSpecial: return "spec";
  }
  return "dep";
}

SubwordGraph::SubwordGraph(std::size_t n, bool self_loops)
    : adjacency_(n), self_loops_(self_loops) {}

bool SubwordGraph::AddEdge(std::size_t i, std::size_t j, EdgeKind kind) {
  if (i >= n() || j >= n()) {
    Fail(ErrorCode::kIndex, "edge (" + std::to_string(i) + "," +
                                std::to_string(j) + ") outside graph of " +
                                std::to_string(n()) + " nodes");
  }
  if (i == j) Fail(ErrorCode::kContract, "explicit self-edges are not stored");
  const auto key = std::minmax(i, j);
  if (!provenance_.emplace(key, kind).second) {
    ++collisions_;
    return false;
  }
  auto insert_sorted = [](std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  };
  insert_sorted(adjacency_[i], j);
  insert_sorted(adjacency_[j], i);
  return true;
}

bool SubwordGraph::HasEdge(std::size_t i, std::size_t j) const {
  return provenance_.count(std::minmax(i, j)) > 0;
}

std::size_t SubwordGraph::CountEdges(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(provenance_.begin(), provenance_.end(),
                    [kind](const auto& kv) { return kv.second == kind; }));
}

void SubwordGraph::set_word_nodes(std::vector<std::size_t> nodes) {
  std::sort(nodes.begin(), nodes.end());
  word_nodes_ = std::move(nodes);
}

SubwordGraph BuildSubwordGraph(const WordGraph& g, const MarkedSequence& seq,
                               const GraphOptions& options,
                               const std::string& instance_id) {
  if (g.words.size() != seq.source_words) {
    Fail(ErrorCode::kAlignment,
         "instance " + instance_id + ": GMR has " +
             std::to_string(g.words.size()) + " words but the sequence has " +
             std::to_string(seq.source_words));
  }
  SubwordGraph sg(seq.n(), options.self_loops);
  const std::size_t kept = seq.kept_words();
  sg.set_word_nodes(seq.first_subword_of_word);

  std::vector<bool> punct(g.words.size(), false);
  if (options.prune_punct) {
    for (const Edge& e : g.edges) {
      if (e.label == "punct") punct[e.dep] = true;
    }
  }
  for (const auto& [u, w] : ToUndirectedUntyped(g)) {
    if (u >= kept || w >= kept || punct[u] || punct[w]) continue;
    sg.AddEdge(seq.first_subword_of_word[u], seq.first_subword_of_word[w],
               EdgeKind::kDependency);
  }

  for (std::size_t i = 0; i < seq.n(); ++i) {
    const std::size_t w = seq.word_of_subword[i];
    if (w == kMarker) continue;
    const std::size_t first = seq.first_subword_of_word[w];
    if (i != first) sg.AddEdge(first, i, EdgeKind::kSubword);
  }

  auto connect_entity = [&](std::size_t open, std::size_t close, Span words) {
    // Marker-free sequences carry no entities.
    if (open >= seq.n() || seq.word_of_subword[open] != kMarker) return;
    for (std::size_t i = 0; i < seq.n(); ++i) {
      const std::size_t w = seq.word_of_subword[i];
      if (w != kMarker && words.contains(w)) {
        sg.AddEdge(open, i, EdgeKind::kSpecial);
      }
    }
    sg.AddEdge(open, close, EdgeKind::kSpecial);
  };
  connect_entity(seq.subj_anchor, seq.subj_close, seq.subj_words);
  connect_entity(seq.obj_anchor, seq.obj_close, seq.obj_words);
  return sg;
}

SubwordGraph RandomizeGraph(const SubwordGraph& sg, std::uint64_t seed,
                            RandomPolicy /*policy*/) {
  const std::size_t requested = sg.CountEdges(EdgeKind::kDependency);
  if (requested == 0) return sg;
  const auto& nodes = sg.word_nodes();
  const std::size_t m = nodes.size();
  if (m < 2) {
    Fail(ErrorCode::kDegenerateGraph,
         "cannot place random dependency edges on fewer than 2 word nodes");
  }
  if (requested > m * (m - 1) / 2) {
    Fail(ErrorCode::kDegenerateGraph,
         std::to_string(requested) + " random edges requested over only " +
             std::to_string(m) + " word nodes");
  }

  SubwordGraph out(sg.n(), sg.self_loops());
  out.set_word_nodes(nodes);
  for (const auto& [pair, kind] : sg.provenance()) {
    if (kind != EdgeKind::kDependency) out.AddEdge(pair.first, pair.second, kind);
  }
  Rng rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  while (chosen.size() < requested) {
    const std::size_t a = nodes[rng.Uniform(m)];
    const std::size_t b = nodes[rng.Uniform(m)];
    if (a == b) continue;
    if (chosen.insert(std::minmax(a, b)).second) {
      out.AddEdge(a, b, EdgeKind::kDependency);
    }
  }
  return out;
}

std::vector<std::size_t> Neighbors(const SubwordGraph& sg, std::size_t i) {
  if (i >= sg.n()) {
    Fail(ErrorCode::kIndex, "node " + std::to_string(i) + " outside graph of " +
                                std::to_string(sg.n()) + " nodes");
  }
  std::vector<std::size_t> out = sg.adjacent(i);
  if (sg.self_loops() || out.empty()) {
    out.insert(std::lower_bound(out.begin(), out.end(), i), i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> NeighborLists(const SubwordGraph& sg) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(sg.n());
  for (std::size_t i = 0; i < sg.n(); ++i) out.push_back(Neighbors(sg, i));
  return out;
}

std::vector<std::tuple<std::size_t, std::size_t, EdgeKind>> EdgeList(
    const SubwordGraph& sg) {
  std::vector<std::tuple<std::size_t, std::size_t, EdgeKind>> out;
  out.reserve(sg.num_edges());
  for (const auto& [pair, kind] : sg.provenance()) {
    out.emplace_back(pair.first, pair.second, kind);
  }
  return out;
}

std::string SerializeSubwordGraphJson(const SubwordGraph& sg,
                                      const std::string& instance_id) {
  nlohmann::ordered_json obj;
  obj["instance_id"] = instance_id;
  obj["n"] = sg.n();
  obj["edges"] = nlohmann::ordered_json::array();
  for (const auto& [i, j, kind] : EdgeList(sg)) {
    obj["edges"].push_back({i, j, EdgeKindTag(kind)});
  }
  return obj.dump();
}

}  // namespace gmrc
