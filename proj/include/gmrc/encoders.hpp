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

// Sequence encoder, decoupled graph propagation (DAGNN-plus) and the vanilla
// GCN baseline, plus the parameter container shared with the classifier.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gmrc/autodiff.hpp"
#include "gmrc/graph.hpp"
#include "gmrc/tensor.hpp"
#include "gmrc/tokenize.hpp"

namespace gmrc {

enum class Activation { kIdentity, kRelu, kSigmoid };
enum class Mixer { kNone, kSelfAttention };
enum class GraphEncoderKind { kDagnnPlus, kVanillaGcn, kNoGraph };

Activation ParseActivation(std::string_view name);   // identity|relu|sigmoid
Mixer ParseMixer(std::string_view name);             // none|self_attention
GraphEncoderKind ParseGraphEncoder(std::string_view name);  // dagnn_plus|vanilla_gcn|none
const char* ActivationName(Activation a);
const char* MixerName(Mixer m);
const char* GraphEncoderName(GraphEncoderKind g);

struct EncoderConfig {
  std::size_t d = 32;
  std::size_t layers = 2;
  Activation activation = Activation::kIdentity;
  Mixer mixer = Mixer::kSelfAttention;
  GraphEncoderKind graph_encoder = GraphEncoderKind::kDagnnPlus;
  bool self_loops = true;
};

void CheckEncoderConfig(const EncoderConfig& cfg);

struct ModelParams {
  Tensor embedding;          // |V| x d
  Tensor wq, wk, wv;         // d x d, SelfAttention only
  Tensor gate;               // d x 1
  std::vector<Tensor> gcn;   // L of d x d, VanillaGcn only
  Tensor proj;               // d x 2d
  Tensor rel_w;              // K x d
  Tensor rel_b;              // 1 x K

  // Stable name/array pairs; absent arrays (empty tensors) are skipped.
  std::vector<std::pair<std::string, Tensor*>> Named();
  std::vector<std::pair<std::string, const Tensor*>> Named() const;
};

// Weight matrices uniform in [-1/sqrt(d), 1/sqrt(d)]; gate and bias zero.
ModelParams InitParams(const EncoderConfig& cfg, std::size_t vocab_size,
                       std::size_t num_labels, std::uint64_t seed);

struct ParamCount {
  std::size_t graph_encoder_params = 0;
  std::size_t total_params = 0;
};

// Throws ContractError when the arrays do not match cfg.
ParamCount CountParams(const ModelParams& p, const EncoderConfig& cfg);

// Parameter leaves on a tape, in the order of ModelParams::Named().
struct ModelVars {
  Var embedding, wq, wk, wv, gate, proj, rel_w, rel_b;
  std::vector<Var> gcn;
  std::vector<Var> all;
};

ModelVars RecordParams(Tape& tape, const ModelParams& p, bool trainable = true);

// Fixed sinusoidal position code, n x d, with entries scaled by
// sqrt(2 / (3d)) to match the RMS of the embedding initialization.
Tensor PositionCode(std::size_t n, std::size_t d);

// Embedding plus position code, optionally followed by one residual
// scaled dot-product self-attention layer.
Var SeqEncode(std::span<const std::int32_t> ids, const ModelVars& p,
              const EncoderConfig& cfg);

// Attention weights of the self-attention mixer (for inspection/tests).
Tensor AttentionWeights(std::span<const std::int32_t> ids, const ModelParams& p,
                        const EncoderConfig& cfg);

// q0 = H; q(l) = act(mean over N_i of q(l-1)); stack (H, q1..qL) per node,
// gate s = sigmoid(stack * W), out = s^T stack.
Var DagnnPlus(Var h, const std::vector<std::vector<std::size_t>>& neighbors,
              Var gate, const EncoderConfig& cfg);

// H(l+1) = ReLU(A_hat H(l) W(l)) with A_hat = D^-1/2 (A + I) D^-1/2.
Var VanillaGcn(Var h, const SubwordGraph& sg, std::span<const Var> weights);

// Symmetric normalization weights of A + I, as (neighbor lists, weights).
std::pair<std::vector<std::vector<std::size_t>>, std::vector<std::vector<double>>>
NormalizedAdjacency(const SubwordGraph& sg);

// Dispatches on cfg.graph_encoder; NoGraph returns h unchanged.
Var GraphEncode(Var h, const SubwordGraph& sg, const ModelVars& p,
                const EncoderConfig& cfg);

}  // namespace gmrc
