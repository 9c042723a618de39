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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "gmrc/encoders.hpp"
#include "gmrc/errors.hpp"
#include "support.hpp"

using namespace gmrc;
using gmrc::testing::MaxPairwiseDistance;
using gmrc::testing::NaiveDagnnPlus;
using gmrc::testing::RandomGraph;
using gmrc::testing::RandomTensor;
using gmrc::testing::Rows;

namespace {

EncoderConfig Cfg(std::size_t d, std::size_t layers, GraphEncoderKind kind,
                  Mixer mixer = Mixer::kNone) {
  EncoderConfig cfg;
  cfg.d = d;
  cfg.layers = layers;
  cfg.graph_encoder = kind;
  cfg.mixer = mixer;
  return cfg;
}

Tensor RunDagnn(const Tensor& h, const SubwordGraph& sg, const Tensor& gate,
                const EncoderConfig& cfg) {
  Tape t;
  return t.value(DagnnPlus(t.Constant(h), NeighborLists(sg), t.Constant(gate), cfg));
}

}  // namespace

TEST_CASE("seq encode: single token without mixer") {
  const auto cfg = Cfg(4, 2, GraphEncoderKind::kNoGraph);
  const auto p = InitParams(cfg, 5, 3, 1);
  Tape t;
  const auto vars = RecordParams(t, p, false);
  const std::vector<std::int32_t> ids = {3};
  const Tensor h = t.value(SeqEncode(ids, vars, cfg));
  const Tensor pos = PositionCode(1, 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(h(0, k) == p.embedding(3, k) + pos(0, k));
}

TEST_CASE("seq encode: id out of range is a vocab error") {
  const auto cfg = Cfg(4, 2, GraphEncoderKind::kNoGraph);
  const auto p = InitParams(cfg, 5, 3, 1);
  Tape t;
  const auto vars = RecordParams(t, p, false);
  const std::vector<std::int32_t> ids = {5};
  try {
    SeqEncode(ids, vars, cfg);
    FAIL("expected a vocab error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVocab);
  }
}

TEST_CASE("seq encode: zero value path leaves the residual") {
  const auto cfg = Cfg(6, 2, GraphEncoderKind::kNoGraph, Mixer::kSelfAttention);
  auto p = InitParams(cfg, 10, 3, 2);
  p.wv.Fill(0.0);
  const std::vector<std::int32_t> ids = {1, 4, 4, 9};
  Tape t;
  const auto vars = RecordParams(t, p, false);
  const Tensor h = t.value(SeqEncode(ids, vars, cfg));
  const auto plain_cfg = Cfg(6, 2, GraphEncoderKind::kNoGraph);
  const Tensor x = t.value(SeqEncode(ids, vars, plain_cfg));
  CHECK(h == x);
}

TEST_CASE("attention rows sum to one") {
  const auto cfg = Cfg(8, 2, GraphEncoderKind::kNoGraph, Mixer::kSelfAttention);
  const auto p = InitParams(cfg, 20, 3, 3);
  const std::vector<std::int32_t> ids = {0, 5, 7, 19, 3, 3, 11, 2};
  const Tensor a = AttentionWeights(ids, p, cfg);
  REQUIRE(a.rows() == 8);
  REQUIRE(a.cols() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(a(i, j) > 0);
      s += a(i, j);
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("position code scale") {
  const std::size_t d = 32;
  const Tensor pos = PositionCode(200, d);
  double sq = 0;
  for (double v : pos.data()) sq += v * v;
  const double rms = std::sqrt(sq / static_cast<double>(pos.size()));
  // Uniform(-1/sqrt(d), 1/sqrt(d)) has RMS 1/sqrt(3d).
  CHECK(rms == doctest::Approx(1.0 / std::sqrt(3.0 * d)).epsilon(0.02));
}

TEST_CASE("dagnn-plus: zero-gate closed forms") {
  const Tensor h = Tensor::FromRows({{0.3, -1.2, 2.0}});
  SubwordGraph single(1, true);
  const Tensor out = RunDagnn(h, single, Tensor(3, 1, 0.0), Cfg(3, 2, GraphEncoderKind::kDagnnPlus));
  for (std::size_t k = 0; k < 3; ++k) CHECK(out(0, k) == 1.5 * h(0, k));

  Rng rng(1);
  const Tensor hr = RandomTensor(rng, 7, 4);
  const auto g = RandomGraph(rng, 7, 0.4);
  const Tensor out0 = RunDagnn(hr, g, Tensor(4, 1, 0.0), Cfg(4, 0, GraphEncoderKind::kDagnnPlus));
  for (std::size_t k = 0; k < hr.size(); ++k) CHECK(out0[k] == 0.5 * hr[k]);
}

TEST_CASE("dagnn-plus: zero gate equals half the stack sum") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.Uniform(8), d = 1 + rng.Uniform(4), L = rng.Uniform(5);
    const Tensor h = RandomTensor(rng, n, d);
    const auto g = RandomGraph(rng, n, 0.3);
    const Tensor out = RunDagnn(h, g, Tensor(d, 1, 0.0), Cfg(d, L, GraphEncoderKind::kDagnnPlus));
    // Iterate the mean propagation directly.
    std::vector<Tensor> q = {h};
    const auto lists = NeighborLists(g);
    for (std::size_t l = 0; l < L; ++l) {
      Tensor next(n, d);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : lists[i]) {
          for (std::size_t k = 0; k < d; ++k) next(i, k) += q.back()(j, k);
        }
        for (std::size_t k = 0; k < d; ++k) next(i, k) /= static_cast<double>(lists[i].size());
      }
      q.push_back(next);
    }
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        double s = 0;
        for (const auto& ql : q) s += ql(i, k);
        diff = std::max(diff, std::abs(out(i, k) - 0.5 * s));
      }
    }
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("dagnn-plus: two-node oracle") {
  const Tensor h = Tensor::FromRows({{1, 0}, {0, 1}});
  SubwordGraph g(2, true);
  g.AddEdge(0, 1, EdgeKind::kDependency);
  Rng rng(3);
  const Tensor gate = RandomTensor(rng, 2, 1);
  const Tensor out = RunDagnn(h, g, gate, Cfg(2, 1, GraphEncoderKind::kDagnnPlus));
  const auto naive = NaiveDagnnPlus(Rows(h), NeighborLists(g), {gate[0], gate[1]}, 1,
                                    Activation::kIdentity);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(out(i, k) - naive[i][k]) < 1e-10);
  }
}

TEST_CASE("dagnn-plus: oracle on random graphs for every activation") {
  Rng rng(4);
  for (Activation act : {Activation::kIdentity, Activation::kRelu, Activation::kSigmoid}) {
    double worst = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + rng.Uniform(12), d = 1 + rng.Uniform(5), L = rng.Uniform(6);
      const Tensor h = RandomTensor(rng, n, d);
      const Tensor gate = RandomTensor(rng, d, 1);
      const auto g = RandomGraph(rng, n, rng.UniformReal(), rng.Bernoulli(0.7));
      auto cfg = Cfg(d, L, GraphEncoderKind::kDagnnPlus);
      cfg.activation = act;
      const Tensor out = RunDagnn(h, g, gate, cfg);
      const auto naive = NaiveDagnnPlus(Rows(h), NeighborLists(g), gate.data(), L, act);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, std::abs(out(i, k) - naive[i][k]));
      }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("dagnn-plus: width mismatch") {
  Tape t;
  SubwordGraph g(2);
  try {
    DagnnPlus(t.Constant(Tensor(2, 3)), NeighborLists(g), t.Constant(Tensor(4, 1)),
              Cfg(3, 2, GraphEncoderKind::kDagnnPlus));
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimension);
  }
}

TEST_CASE("dagnn-plus: permutation equivariance") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.Uniform(10), d = 1 + rng.Uniform(4);
    const Tensor h = RandomTensor(rng, n, d);
    const Tensor gate = RandomTensor(rng, d, 1);
    const auto g = RandomGraph(rng, n, 0.35);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    Tensor ph(n, d);
    SubwordGraph pg(n, true);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) ph(perm[i], k) = h(i, k);
    }
    for (const auto& [pair, kind] : g.provenance()) pg.AddEdge(perm[pair.first], perm[pair.second], kind);
    const auto cfg = Cfg(d, 3, GraphEncoderKind::kDagnnPlus);
    const Tensor out = RunDagnn(h, g, gate, cfg);
    const Tensor pout = RunDagnn(ph, pg, gate, cfg);
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) diff = std::max(diff, std::abs(pout(perm[i], k) - out(i, k)));
    }
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("dagnn-plus: gates lie strictly inside (0, 1)") {
  // Output is s^T stack; with a one-hot h and L = 0 the gate is recoverable.
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor gate = RandomTensor(rng, 3, 1, 30.0);
    const Tensor h = Tensor::FromRows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const Tensor out = RunDagnn(h, SubwordGraph(3), gate, Cfg(3, 0, GraphEncoderKind::kDagnnPlus));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(out(i, i) > 0.0);
      CHECK(out(i, i) < 1.0);
    }
  }
}

TEST_CASE("vanilla gcn: zero layers and smoothing") {
  Tape t;
  Rng rng(7);
  const Tensor h = RandomTensor(rng, 4, 3);
  const auto g = RandomGraph(rng, 4, 0.5);
  CHECK(t.value(VanillaGcn(t.Constant(h), g, {})) == h);

  // Triangle, identity weights, non-negative inputs so ReLU is inert.
  SubwordGraph tri(3, true);
  tri.AddEdge(0, 1, EdgeKind::kDependency);
  tri.AddEdge(1, 2, EdgeKind::kDependency);
  tri.AddEdge(0, 2, EdgeKind::kDependency);
  Tensor x = RandomTensor(rng, 3, 4);
  for (double& v : x.data()) v = std::abs(v);
  const Var eye = t.Constant(Tensor::Identity(4));
  Var cur = t.Constant(x);
  double prev = MaxPairwiseDistance(Rows(x));
  for (int l = 0; l < 5; ++l) {
    const std::vector<Var> w = {eye};
    cur = VanillaGcn(cur, tri, w);
    const double dist = MaxPairwiseDistance(Rows(t.value(cur)));
    CHECK(dist <= prev + 1e-15);
    prev = dist;
  }
}

TEST_CASE("normalized adjacency is symmetric") {
  Rng rng(9);
  const auto g = RandomGraph(rng, 8, 0.3, false);
  const auto [lists, weights] = NormalizedAdjacency(g);
  auto weight = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < lists[i].size(); ++k) {
      if (lists[i][k] == j) return weights[i][k];
    }
    return 0.0;
  };
  for (std::size_t i = 0; i < 8; ++i) {
    const double deg = static_cast<double>(g.adjacent(i).size() + 1);
    CHECK(weight(i, i) == doctest::Approx(1.0 / deg));
    for (std::size_t j = 0; j < 8; ++j) CHECK(weight(i, j) == weight(j, i));
  }
}

TEST_CASE("parameter counts") {
  for (std::size_t d : {8u, 32u}) {
    for (std::size_t L : {2u, 3u, 4u}) {
      auto cfg = Cfg(d, L, GraphEncoderKind::kDagnnPlus, Mixer::kSelfAttention);
      CHECK(CountParams(InitParams(cfg, 50, 4, 1), cfg).graph_encoder_params == d);
      cfg.graph_encoder = GraphEncoderKind::kVanillaGcn;
      CHECK(CountParams(InitParams(cfg, 50, 4, 1), cfg).graph_encoder_params == L * d * d);
      cfg.graph_encoder = GraphEncoderKind::kNoGraph;
      CHECK(CountParams(InitParams(cfg, 50, 4, 1), cfg).graph_encoder_params == 0);
    }
  }
  auto cfg = Cfg(8, 3, GraphEncoderKind::kVanillaGcn);
  CHECK(CountParams(InitParams(cfg, 10, 2, 1), cfg).graph_encoder_params == 192);

  // V*d + d + d*2d + K*d + K, no mixer.
  cfg = Cfg(8, 2, GraphEncoderKind::kDagnnPlus);
  CHECK(CountParams(InitParams(cfg, 10, 3, 1), cfg).total_params ==
        10 * 8 + 8 + 8 * 16 + 3 * 8 + 3);

  // Arrays that disagree with the config are rejected.
  auto p = InitParams(cfg, 10, 3, 1);
  p.gate = Tensor(7, 1);
  CHECK_THROWS_AS(CountParams(p, cfg), Error);
}

TEST_CASE("initialization ranges") {
  const auto cfg = Cfg(16, 2, GraphEncoderKind::kVanillaGcn, Mixer::kSelfAttention);
  const auto p = InitParams(cfg, 30, 4, 9);
  const double bound = 1.0 / std::sqrt(16.0);
  for (const auto& [name, t] : p.Named()) {
    if (name == "gate" || name == "rel_b") {
      for (double v : t->data()) CHECK(v == 0.0);
      continue;
    }
    for (double v : t->data()) CHECK(std::abs(v) <= bound);
  }
  // Same seed, same draws.
  const auto q = InitParams(cfg, 30, 4, 9);
  CHECK(q.embedding == p.embedding);
  CHECK(q.gcn == p.gcn);
}

TEST_CASE("graph encode: none passes the sequence encoding through") {
  const auto cfg = Cfg(4, 2, GraphEncoderKind::kNoGraph);
  const auto p = InitParams(cfg, 5, 3, 1);
  Tape t;
  const auto vars = RecordParams(t, p, false);
  Rng rng(3);
  const Var h = t.Constant(RandomTensor(rng, 3, 4));
  const Var out = GraphEncode(h, RandomGraph(rng, 3, 0.5), vars, cfg);
  CHECK(t.value(out) == t.value(h));
}

TEST_CASE("config names round trip") {
  for (auto a : {Activation::kIdentity, Activation::kRelu, Activation::kSigmoid}) {
    CHECK(ParseActivation(ActivationName(a)) == a);
  }
  for (auto m : {Mixer::kNone, Mixer::kSelfAttention}) CHECK(ParseMixer(MixerName(m)) == m);
  for (auto g : {GraphEncoderKind::kDagnnPlus, GraphEncoderKind::kVanillaGcn, GraphEncoderKind::kNoGraph}) {
    CHECK(ParseGraphEncoder(GraphEncoderName(g)) == g);
  }
  CHECK_THROWS_AS(ParseActivation("tanh"), Error);
}
