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

// Tape-based reverse-mode differentiation over Tensor.
//
// A Tape records every operation in execution order, so inputs always
// precede the nodes that consume them. Backward() walks the record in
// reverse and accumulates gradients; leaves created with Param() expose
// their gradient through grad(). Every op checks its output for NaN/Inf.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gmrc/tensor.hpp"

namespace gmrc {

class Tape;

// Handle to a recorded tensor.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Tensor value);
  Var Param(Tensor value);

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  // Zero-filled when v did not receive any gradient.
  const Tensor& grad(Var v);
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Loss must be 1x1 and recorded on this tape.
  void Backward(Var loss);

  // Op plumbing. `inputs` determine requires_grad; `backward` receives the
  // node's own index and should call Accumulate on its inputs.
  using BackwardFn = std::function<void(Tape&, std::size_t)>;
  Var Record(const char* op, Tensor value, std::initializer_list<Var> inputs,
             BackwardFn backward);
  Var Record(const char* op, Tensor value, std::span<const Var> inputs,
             BackwardFn backward);
  const Tensor& node_grad(std::size_t id) const { return nodes_[id].grad; }
  Tensor& MutableGrad(Var v);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;
    bool requires_grad = false;
  };
  std::vector<Node> nodes_;
};

// Core ops. Shapes are rows x cols; vectors are 1 x d rows.
Var MatMul(Var a, Var b);           // a * b
Var MatMulNT(Var a, Var b);         // a * b^T
Var Add(Var a, Var b);
Var Scale(Var a, double s);
Var Mul(Var a, Var b);              // elementwise
Var Relu(Var x);
Var Sigmoid(Var x);
Var ConcatRows(std::span<const Var> parts);   // 1 x a, 1 x b -> 1 x (a+b)
Var StackRows(std::span<const Var> parts);    // k blocks of r x d -> (k*r) x d
Var RowSelect(Var x, std::size_t i);          // -> 1 x d
Var GatherRows(Var table, std::span<const std::int32_t> ids);
// out[i] = mean of x rows in lists[i]. Lists must be non-empty.
Var MeanRows(Var x, const std::vector<std::vector<std::size_t>>& lists);
// out[i] = sum_k weights[i][k] * x[lists[i][k]].
Var WeightedRows(Var x, const std::vector<std::vector<std::size_t>>& lists,
                 const std::vector<std::vector<double>>& weights);
Var ScaleRows(Var x, Var g);        // x: n x d, g: n x 1
Var SoftmaxRows(Var x);
Var Sum(Var x);                     // -> 1 x 1
// -log softmax(logits)[gold] for a 1 x K row, log-sum-exp stabilized.
Var SoftmaxCrossEntropy(Var logits, std::size_t gold);

// Numerically stable softmax of one row.
std::vector<double> Softmax(std::span<const double> logits);

// Builds a scalar loss from parameter leaves on a fresh tape.
using LossBuilder = std::function<Var(Tape&, const std::vector<Var>&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Central differences (f(t+e)-f(t-e))/2e against Backward(); the relative
// error uses a max(|a|, |b|, 1e-8) denominator.
GradCheckResult FiniteDiffCheck(const LossBuilder& f, std::vector<Tensor> params,
                                double epsilon = 1e-5);

}  // namespace gmrc
