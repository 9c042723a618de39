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

#include "gmrc/encoders.hpp"

#include <algorithm>
#include <cmath>

#include "gmrc/errors.hpp"
#include "gmrc/rng.hpp"

namespace gmrc {

Activation ParseActivation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  Fail(ErrorCode::kConfig, "unknown activation \"" + std::string(name) +
                               "\"; use identity|relu|sigmoid");
}

Mixer ParseMixer(std::string_view name) {
  if (name == "none") return Mixer::kNone;
  if (name == "self_attention") return Mixer::kSelfAttention;
  Fail(ErrorCode::kConfig,
       "unknown mixer \"" + std::string(name) + "\"; use none|self_attention");
}

GraphEncoderKind ParseGraphEncoder(std::string_view name) {
  if (name == "dagnn_plus") return GraphEncoderKind::kDagnnPlus;
  if (name == "vanilla_gcn") return GraphEncoderKind::kVanillaGcn;
  if (name == "none") return GraphEncoderKind::kNoGraph;
  Fail(ErrorCode::kConfig, "unknown graph encoder \"" + std::string(name) +
                               "\"; use dagnn_plus|vanilla_gcn|none");
}

const char* ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "identity";
}

const char* MixerName(Mixer m) {
  return m == Mixer::kNone ? "none" : "self_attention";
}

const char* GraphEncoderName(GraphEncoderKind g) {
  switch (g) {
    case GraphEncoderKind::kDagnnPlus: return "dagnn_plus";
    case GraphEncoderKind::kVanillaGcn: return "vanilla_gcn";
    case GraphEncoderKind::kNoGraph: return "none";
  }
  return "none";
}

void CheckEncoderConfig(const EncoderConfig& cfg) {
  if (cfg.d < 1) Fail(ErrorCode::kConfig, "hidden width d must be >= 1");
}

std::vector<std::pair<std::string, Tensor*>> ModelParams::Named() {
  std::vector<std::pair<std::string, Tensor*>> out;
  auto add = [&out](std::string name, Tensor& t) {
    if (t.size() > 0) out.emplace_back(std::move(name), &t);
  };
  add("embedding", embedding);
  add("wq", wq);
  add("wk", wk);
  add("wv", wv);
  add("gate", gate);
  for (std::size_t l = 0; l < gcn.size(); ++l) add("gcn." + std::to_string(l), gcn[l]);
  add("proj", proj);
  add("rel_w", rel_w);
  add("rel_b", rel_b);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::Named() const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<ModelParams*>(this)->Named()) {
    out.emplace_back(name, t);
  }
  return out;
}

ModelParams InitParams(const EncoderConfig& cfg, std::size_t vocab_size,
                       std::size_t num_labels, std::uint64_t seed) {
  CheckEncoderConfig(cfg);
  Rng rng(seed);
  const std::size_t d = cfg.d;
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  auto uniform = [&](std::size_t r, std::size_t c) {
    Tensor t(r, c);
    for (double& v : t.data()) v = rng.UniformReal(-bound, bound);
    return t;
  };
  ModelParams p;
  p.embedding = uniform(vocab_size, d);
  if (cfg.mixer == Mixer::kSelfAttention) {
    p.wq = uniform(d, d);
    p.wk = uniform(d, d);
    p.wv = uniform(d, d);
  }
  if (cfg.graph_encoder == GraphEncoderKind::kDagnnPlus) p.gate = Tensor(d, 1);
  if (cfg.graph_encoder == GraphEncoderKind::kVanillaGcn) {
    for (std::size_t l = 0; l < cfg.layers; ++l) p.gcn.push_back(uniform(d, d));
  }
  p.proj = uniform(d, 2 * d);
  p.rel_w = uniform(num_labels, d);
  p.rel_b = Tensor(1, num_labels);
  return p;
}

ParamCount CountParams(const ModelParams& p, const EncoderConfig& cfg) {
  const std::size_t d = cfg.d;
  auto expect = [](bool ok, const std::string& what) {
    if (!ok) Fail(ErrorCode::kContract, "parameters inconsistent with config: " + what);
  };
  ParamCount count;
  switch (cfg.graph_encoder) {
    case GraphEncoderKind::kDagnnPlus:
      expect(p.gate.rows() == d && p.gate.cols() == 1, "gate must be d x 1");
      expect(p.gcn.empty(), "DAGNN-plus has no GCN weights");
      count.graph_encoder_params = p.gate.size();
      break;
    case GraphEncoderKind::kVanillaGcn:
      expect(p.gate.size() == 0, "vanilla GCN has no gate");
      expect(p.gcn.size() == cfg.layers, "vanilla GCN needs L weight matrices");
      for (const Tensor& w : p.gcn) {
        expect(w.rows() == d && w.cols() == d, "GCN weights must be d x d");
        count.graph_encoder_params += w.size();
      }
      break;
    case GraphEncoderKind::kNoGraph:
      expect(p.gate.size() == 0 && p.gcn.empty(), "no-graph model has graph weights");
      break;
  }
  for (const auto& [name, t] : p.Named()) count.total_params += t->size();
  return count;
}

ModelVars RecordParams(Tape& tape, const ModelParams& p, bool trainable) {
  ModelVars v;
  auto rec = [&](const Tensor& t) {
    Var var = trainable ? tape.Param(t) : tape.Constant(t);
    v.all.push_back(var);
    return var;
  };
  v.embedding = rec(p.embedding);
  if (p.wq.size()) {
    v.wq = rec(p.wq);
    v.wk = rec(p.wk);
    v.wv = rec(p.wv);
  }
  if (p.gate.size()) v.gate = rec(p.gate);
  for (const Tensor& w : p.gcn) v.gcn.push_back(rec(w));
  v.proj = rec(p.proj);
  v.rel_w = rec(p.rel_w);
  v.rel_b = rec(p.rel_b);
  return v;
}

Tensor PositionCode(std::size_t n, std::size_t d) {
  // Entries are scaled to the RMS of the embedding initialization
  // (uniform in +-1/sqrt(d)), so position does not drown token identity.
  const double scale = std::sqrt(2.0 / (3.0 * static_cast<double>(d)));
  Tensor p(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double rate =
          std::pow(10000.0, -static_cast<double>(k - k % 2) / static_cast<double>(d));
      const double angle = static_cast<double>(i) * rate;
      p(i, k) = ((k % 2 == 0) ? std::sin(angle) : std::cos(angle)) * scale;
    }
  }
  return p;
}

namespace {

struct AttentionParts {
  Var x;
  Var weights;
  Var values;
};

AttentionParts Attend(std::span<const std::int32_t> ids, const ModelVars& p,
                      const EncoderConfig& cfg) {
  Tape& tape = *p.embedding.tape;
  const Tensor& table = tape.value(p.embedding);
  if (table.cols() != cfg.d) {
    Fail(ErrorCode::kDimension, "embedding width " + std::to_string(table.cols()) +
                                    " does not match d=" + std::to_string(cfg.d));
  }
  Var x = Add(GatherRows(p.embedding, ids),
              tape.Constant(PositionCode(ids.size(), cfg.d)));
  if (cfg.mixer == Mixer::kNone) return {x, {}, {}};
  Var q = MatMul(x, p.wq);
  Var k = MatMul(x, p.wk);
  Var v = MatMul(x, p.wv);
  Var scores = Scale(MatMulNT(q, k), 1.0 / std::sqrt(static_cast<double>(cfg.d)));
  return {x, SoftmaxRows(scores), v};
}

}  // namespace

Var SeqEncode(std::span<const std::int32_t> ids, const ModelVars& p,
              const EncoderConfig& cfg) {
  AttentionParts a = Attend(ids, p, cfg);
  if (cfg.mixer == Mixer::kNone) return a.x;
  return Add(a.x, MatMul(a.weights, a.values));
}

Tensor AttentionWeights(std::span<const std::int32_t> ids, const ModelParams& p,
                        const EncoderConfig& cfg) {
  if (cfg.mixer != Mixer::kSelfAttention) {
    Fail(ErrorCode::kConfig, "attention weights need the self-attention mixer");
  }
  Tape tape;
  const ModelVars vars = RecordParams(tape, p, false);
  return tape.value(Attend(ids, vars, cfg).weights);
}

Var DagnnPlus(Var h, const std::vector<std::vector<std::size_t>>& neighbors,
              Var gate, const EncoderConfig& cfg) {
  Tape& tape = *h.tape;
  const Tensor& hv = tape.value(h);
  const Tensor& gv = tape.value(gate);
  if (gv.rows() != hv.cols() || gv.cols() != 1) {
    Fail(ErrorCode::kDimension, "dagnn_plus: representation " + hv.ShapeString() +
                                    " does not match gate " + gv.ShapeString());
  }
  if (neighbors.size() != hv.rows()) {
    Fail(ErrorCode::kDimension, "dagnn_plus: graph has " +
                                    std::to_string(neighbors.size()) +
                                    " nodes but the sequence has " +
                                    std::to_string(hv.rows()));
  }
  std::vector<Var> depth{h};
  Var q = h;
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    q = MeanRows(q, neighbors);
    switch (cfg.activation) {
      case Activation::kIdentity: break;
      case Activation::kRelu: q = Relu(q); break;
      case Activation::kSigmoid: q = Sigmoid(q); break;
    }
    depth.push_back(q);
  }
  Var out = ScaleRows(depth[0], Sigmoid(MatMul(depth[0], gate)));
  for (std::size_t l = 1; l < depth.size(); ++l) {
    out = Add(out, ScaleRows(depth[l], Sigmoid(MatMul(depth[l], gate))));
  }
  return out;
}

std::pair<std::vector<std::vector<std::size_t>>, std::vector<std::vector<double>>>
NormalizedAdjacency(const SubwordGraph& sg) {
  const std::size_t n = sg.n();
  std::vector<std::vector<std::size_t>> lists(n);
  std::vector<double> degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& adj = sg.adjacent(i);
    lists[i] = adj;
    lists[i].insert(std::lower_bound(lists[i].begin(), lists[i].end(), i), i);
    degree[i] = static_cast<double>(lists[i].size());
  }
  std::vector<std::vector<double>> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : lists[i]) {
      weights[i].push_back(1.0 / std::sqrt(degree[i] * degree[j]));
    }
  }
  return {std::move(lists), std::move(weights)};
}

Var VanillaGcn(Var h, const SubwordGraph& sg, std::span<const Var> weights) {
  Tape& tape = *h.tape;
  if (sg.n() != tape.value(h).rows()) {
    Fail(ErrorCode::kDimension, "vanilla_gcn: graph has " + std::to_string(sg.n()) +
                                    " nodes but the sequence has " +
                                    std::to_string(tape.value(h).rows()));
  }
  const auto [lists, norm] = NormalizedAdjacency(sg);
  Var x = h;
  for (const Var& w : weights) {
    x = Relu(MatMul(WeightedRows(x, lists, norm), w));
  }
  return x;
}

Var GraphEncode(Var h, const SubwordGraph& sg, const ModelVars& p,
                const EncoderConfig& cfg) {
  switch (cfg.graph_encoder) {
    case GraphEncoderKind::kDagnnPlus:
      return DagnnPlus(h, NeighborLists(sg), p.gate, cfg);
    case GraphEncoderKind::kVanillaGcn:
      if (p.gcn.size() != cfg.layers) {
        Fail(ErrorCode::kContract, "vanilla GCN needs one weight matrix per layer");
      }
      return VanillaGcn(h, sg, p.gcn);
    case GraphEncoderKind::kNoGraph:
      return h;
  }
  return h;
}

}  // namespace gmrc
