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

#include "gmrc/gmr.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <tuple>

#include "gmrc/errors.hpp"
#include "json.hpp"

namespace gmrc {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return cols;
}

bool ParseInt(std::string_view s, long long* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

std::string LineTag(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

}  // namespace

const char* FrameworkName(Framework f) {
  switch (f) {
    case Framework::kUD: return "UD";
    case Framework::kDEP: return "DEP";
    case Framework::kDM: return "DM";
    case Framework::kSDP: return "SDP";
    case Framework::kGeneric: return "GENERIC";
  }
  return "GENERIC";
}

Framework ParseFramework(std::string_view name) {
  if (name == "UD") return Framework::kUD;
  if (name == "DEP") return Framework::kDEP;
  if (name == "DM") return Framework::kDM;
  if (name == "SDP") return Framework::kSDP;
  if (name == "GENERIC") return Framework::kGeneric;
  Fail(ErrorCode::kParse, "unknown framework \"" + std::string(name) +
                              "\"; allowed values: UD, DEP, DM, SDP, GENERIC");
}

void CheckWellFormed(const WordGraph& g) {
  std::set<std::tuple<std::size_t, std::size_t, std::string>> seen;
  for (const Edge& e : g.edges) {
    if (e.head >= g.words.size() || e.dep >= g.words.size()) {
      Fail(ErrorCode::kParse,
           "edge " + std::to_string(e.head) + "->" + std::to_string(e.dep) +
               " out of range for " + std::to_string(g.words.size()) +
               " words");
    }
    if (e.head == e.dep) {
      Fail(ErrorCode::kParse, "self-edge on word " + std::to_string(e.head));
    }
    if (!seen.emplace(e.head, e.dep, e.label).second) {
      Fail(ErrorCode::kParse, "duplicate edge " + std::to_string(e.head) +
                                  "->" + std::to_string(e.dep) + " (" +
                                  e.label + ")");
    }
  }
}

std::vector<WordGraph> ParseConllu(std::string_view text, Framework framework) {
  std::vector<WordGraph> graphs;
  const auto lines = SplitLines(text);

  WordGraph current;
  current.framework = framework;
  // (head as written, 1-based; dependent 0-based; label; line number)
  struct PendingHead {
    long long head;
    std::size_t dep;
    std::string label;
    std::size_t line_no;
  };
  std::vector<PendingHead> pending;
  std::size_t block_start = 0;

  auto flush = [&]() {
    if (current.words.empty()) return;
    for (const PendingHead& p : pending) {
      if (p.head < 0 || static_cast<std::size_t>(p.head) > current.words.size()) {
        Fail(ErrorCode::kParse, LineTag(p.line_no) + ": HEAD " +
                                    std::to_string(p.head) +
                                    " out of range for sentence of " +
                                    std::to_string(current.words.size()) +
                                    " tokens");
      }
      if (p.head == 0) continue;
      current.edges.push_back(
          {static_cast<std::size_t>(p.head - 1), p.dep, p.label});
    }
    try {
      CheckWellFormed(current);
    } catch (const Error& e) {
      Fail(ErrorCode::kParse,
           "sentence starting at " + LineTag(block_start) + ": " + e.what());
    }
    graphs.push_back(std::move(current));
    current = WordGraph{};
    current.framework = framework;
    pending.clear();
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (IsBlank(line)) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    const auto cols = SplitTabs(line);
    if (cols.size() != 10) {
      Fail(ErrorCode::kParse, LineTag(line_no) + ": expected 10 tab-separated "
                                                 "columns, found " +
                                  std::to_string(cols.size()));
    }
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      continue;
    }
    long long id_value = 0;
    if (!ParseInt(id, &id_value)) {
      Fail(ErrorCode::kParse,
           LineTag(line_no) + ": non-integer ID \"" + std::string(id) + "\"");
    }
    if (current.words.empty()) block_start = line_no;
    if (id_value != static_cast<long long>(current.words.size()) + 1) {
      Fail(ErrorCode::kParse, LineTag(line_no) + ": ID " + std::string(id) +
                                  " is not sequential");
    }
    long long head = 0;
    if (!ParseInt(cols[6], &head)) {
      Fail(ErrorCode::kParse, LineTag(line_no) + ": non-integer HEAD \"" +
                                  std::string(cols[6]) + "\"");
    }
    pending.push_back({head, current.words.size(), std::string(cols[7]),
                       line_no});
    current.words.emplace_back(cols[1]);
  }
  flush();
  return graphs;
}

namespace {

WordGraph GraphFromJson(const nlohmann::json& obj) {
  if (!obj.is_object()) Fail(ErrorCode::kParse, "graph is not a JSON object");
  for (const char* field : {"words", "edges", "framework"}) {
    if (!obj.contains(field)) {
      Fail(ErrorCode::kParse, std::string("missing field \"") + field + "\"");
    }
  }
  WordGraph g;
  const auto& words = obj.at("words");
  if (!words.is_array()) Fail(ErrorCode::kParse, "\"words\" is not an array");
  for (const auto& w : words) {
    if (!w.is_string()) Fail(ErrorCode::kParse, "word is not a string");
    g.words.push_back(w.get<std::string>());
  }
  if (!obj.at("framework").is_string()) {
    Fail(ErrorCode::kParse, "\"framework\" is not a string");
  }
  g.framework = ParseFramework(obj.at("framework").get<std::string>());
  const auto& edges = obj.at("edges");
  if (!edges.is_array()) Fail(ErrorCode::kParse, "\"edges\" is not an array");
  for (const auto& e : edges) {
    for (const char* field : {"head", "dep", "label"}) {
      if (!e.is_object() || !e.contains(field)) {
        Fail(ErrorCode::kParse,
             std::string("edge missing field \"") + field + "\"");
      }
    }
    const auto& head = e.at("head");
    const auto& dep = e.at("dep");
    if (!head.is_number_integer() || !dep.is_number_integer()) {
      Fail(ErrorCode::kParse, "edge indices must be integers");
    }
    if (!e.at("label").is_string()) {
      Fail(ErrorCode::kParse, "edge label must be a string");
    }
    const long long h = head.get<long long>();
    const long long d = dep.get<long long>();
    const long long n = static_cast<long long>(g.words.size());
    if (h < 0 || h >= n || d < 0 || d >= n) {
      Fail(ErrorCode::kParse, "edge " + std::to_string(h) + "->" +
                                  std::to_string(d) + " out of range for " +
                                  std::to_string(n) + " words");
    }
    g.edges.push_back({static_cast<std::size_t>(h),
                       static_cast<std::size_t>(d),
                       e.at("label").get<std::string>()});
  }
  CheckWellFormed(g);
  return g;
}

}  // namespace

std::vector<WordGraph> ParseGraphJsonl(std::string_view text) {
  std::vector<WordGraph> graphs;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    try {
      graphs.push_back(GraphFromJson(nlohmann::json::parse(lines[i])));
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kParse, LineTag(i + 1) + ": " + e.what());
    } catch (const Error& e) {
      Fail(ErrorCode::kParse, LineTag(i + 1) + ": " + e.what());
    }
  }
  return graphs;
}

std::string SerializeConllu(const std::vector<WordGraph>& graphs) {
  std::ostringstream out;
  for (const WordGraph& g : graphs) {
    std::vector<const Edge*> head_of(g.words.size(), nullptr);
    for (const Edge& e : g.edges) {
      if (head_of[e.dep] != nullptr) {
        Fail(ErrorCode::kContract,
             "word " + std::to_string(e.dep) +
                 " has multiple heads; CoNLL-U holds one head per word");
      }
      head_of[e.dep] = &e;
    }
    for (std::size_t i = 0; i < g.words.size(); ++i) {
      const Edge* e = head_of[i];
      out << i + 1 << '\t' << g.words[i] << "\t_\t_\t_\t_\t"
          << (e ? e->head + 1 : 0) << '\t' << (e ? e->label : "root")
          << "\t_\t_\n";
    }
    out << '\n';
  }
  return out.str();
}

std::string SerializeGraphJson(const WordGraph& g) {
  ordered_json obj;
  obj["words"] = g.words;
  obj["edges"] = ordered_json::array();
  for (const Edge& e : g.edges) {
    ordered_json edge;
    edge["head"] = e.head;
    edge["dep"] = e.dep;
    edge["label"] = e.label;
    obj["edges"].push_back(std::move(edge));
  }
  obj["framework"] = FrameworkName(g.framework);
  return obj.dump();
}

std::string SerializeGraphJsonl(const std::vector<WordGraph>& graphs) {
  std::string out;
  for (const WordGraph& g : graphs) {
    out += SerializeGraphJson(g);
    out += '\n';
  }
  return out;
}

ValidationReport ValidateGraph(const WordGraph& g) {
  ValidationReport report;
  report.framework = g.framework;
  const std::size_t n = g.words.size();

  std::vector<std::size_t> in_degree(n, 0);
  std::vector<bool> attached(n, false);
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges) {
    ++in_degree[e.dep];
    attached[e.head] = attached[e.dep] = true;
    children[e.head].push_back(e.dep);
    parent[find(e.head)] = find(e.dep);
  }

  std::vector<std::size_t> multi_headed;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_degree[i] > 1) multi_headed.push_back(i);
    if (!attached[i]) report.unattached_word_indices.push_back(i);
  }
  report.is_single_headed = multi_headed.empty();

  // Kahn's algorithm over the directed edges.
  std::vector<std::size_t> pending_in = in_degree;
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending_in[i] == 0) queue.push_back(i);
  }
  std::size_t visited = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.back();
    queue.pop_back();
    ++visited;
    for (std::size_t v : children[u]) {
      if (--pending_in[v] == 0) queue.push_back(v);
    }
  }
  report.is_acyclic = visited == n;

  std::set<std::size_t> components;
  for (std::size_t i = 0; i < n; ++i) components.insert(find(i));
  report.is_connected = components.size() <= 1;

  const bool tree_framework =
      g.framework == Framework::kUD || g.framework == Framework::kDEP;
  const std::string fw = FrameworkName(g.framework);
  if (tree_framework) {
    for (std::size_t w : multi_headed) {
      report.violations.push_back(fw + ": word " + std::to_string(w) + " (" +
                                  g.words[w] + ") has " +
                                  std::to_string(in_degree[w]) + " heads");
    }
    if (!report.is_connected) {
      report.violations.push_back(fw + ": graph has " +
                                  std::to_string(components.size()) +
                                  " disconnected components");
    }
  }
  if (!report.is_acyclic && g.framework != Framework::kGeneric) {
    report.violations.push_back(fw + ": directed cycle present");
  }
  return report;
}

std::set<WordPair> ToUndirectedUntyped(const WordGraph& g) {
  std::set<WordPair> pairs;
  for (const Edge& e : g.edges) {
    pairs.emplace(std::min(e.head, e.dep), std::max(e.head, e.dep));
  }
  return pairs;
}

}  // namespace gmrc
