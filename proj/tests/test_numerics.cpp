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

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "gmrc/autodiff.hpp"
#include "gmrc/errors.hpp"
#include "gmrc/tensor.hpp"
#include "support.hpp"

using namespace gmrc;
using gmrc::testing::RandomTensor;

namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{0};
}

}  // namespace

TEST_CASE("relu and sigmoid") {
  Tape t;
  const Var x = t.Constant(Tensor::FromRows({{-1, 0, 2}}));
  CHECK(t.value(Relu(x)) == Tensor::FromRows({{0, 0, 2}}));
  CHECK(t.value(Sigmoid(t.Constant(Tensor::Scalar(0)))).item() == 0.5);
}

TEST_CASE("mean_rows") {
  Tape t;
  const Var x = t.Constant(Tensor::FromRows({{1, 0}, {0, 1}}));
  const auto out = t.value(MeanRows(x, {{0, 1}}));
  CHECK(out == Tensor::FromRows({{0.5, 0.5}}));
  CHECK(CodeOf([&] { MeanRows(x, {{}}); }) == ErrorCode::kContract);
}

TEST_CASE("shape errors name both shapes") {
  Tape t;
  const Var a = t.Constant(Tensor(2, 3));
  const Var b = t.Constant(Tensor(2, 3));
  try {
    MatMul(a, b);
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimension);
    const std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
  }
  CHECK(CodeOf([&] { Add(a, t.Constant(Tensor(3, 2))); }) == ErrorCode::kDimension);
}

TEST_CASE("matmul values") {
  Tape t;
  const Var a = t.Constant(Tensor::FromRows({{1, 2}, {3, 4}}));
  const Var b = t.Constant(Tensor::FromRows({{5, 6}, {7, 8}}));
  CHECK(t.value(MatMul(a, b)) == Tensor::FromRows({{19, 22}, {43, 50}}));
  CHECK(t.value(MatMulNT(a, b)) == Tensor::FromRows({{17, 23}, {39, 53}}));
}

TEST_CASE("non-finite values trip an error") {
  Tape t;
  const Var big = t.Constant(Tensor::Scalar(1e308));
  CHECK(CodeOf([&] { Scale(big, 10.0); }) == ErrorCode::kNumeric);
}

TEST_CASE("backward: sigmoid gradient") {
  Tape t;
  const Var w = t.Param(Tensor::Scalar(0));
  const Var loss = Scale(Sigmoid(w), 2.0);
  t.Backward(loss);
  CHECK(t.grad(w).item() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("backward: unreachable parameters get zero gradients") {
  Tape t;
  const Var w = t.Param(Tensor::Scalar(3));
  const Var u = t.Param(Tensor(2, 2, 1.0));
  t.Backward(Scale(w, 2.0));
  CHECK(t.grad(w).item() == 2.0);
  CHECK(t.grad(u) == Tensor(2, 2, 0.0));
}

TEST_CASE("backward: loss must be scalar") {
  Tape t;
  const Var w = t.Param(Tensor(1, 2, 1.0));
  CHECK(CodeOf([&] { t.Backward(w); }) == ErrorCode::kContract);
}

TEST_CASE("finite differences: quadratic and constant") {
  auto quad = FiniteDiffCheck(
      [](Tape&, const std::vector<Var>& p) { return Mul(p[0], p[0]); }, {Tensor::Scalar(3)});
  CHECK(quad.analytic == 6.0);
  CHECK(std::abs(quad.numeric - 6.0) < 1e-8);

  auto constant = FiniteDiffCheck(
      [](Tape& t, const std::vector<Var>&) { return t.Constant(Tensor::Scalar(4)); },
      {Tensor::Scalar(1)});
  CHECK(constant.max_relative_error == 0.0);
  CHECK(constant.analytic == 0.0);

  CHECK(CodeOf([] {
          FiniteDiffCheck([](Tape&, const std::vector<Var>& p) { return p[0]; },
                          {Tensor::Scalar(1)}, 0.0);
        }) == ErrorCode::kContract);
}

TEST_CASE("finite differences over every op") {
  Rng rng(21);
  const std::vector<Tensor> params = {RandomTensor(rng, 4, 3), RandomTensor(rng, 3, 3),
                                      RandomTensor(rng, 3, 1), RandomTensor(rng, 5, 6),
                                      RandomTensor(rng, 1, 5)};
  const std::vector<std::int32_t> ids = {2, 0, 2};
  const auto f = [&](Tape&, const std::vector<Var>& p) {
    Var h = GatherRows(p[0], ids);
    h = Add(MatMul(h, p[1]), h);
    h = MatMul(SoftmaxRows(MatMulNT(h, h)), Sigmoid(h));
    h = MeanRows(h, {{0, 1}, {1, 2}, {0, 2}});
    h = WeightedRows(h, {{0, 2}, {1}, {2, 0}}, {{0.3, 0.7}, {1.0}, {0.5, -0.2}});
    Var st = StackRows(std::vector<Var>{h, Relu(h)});
    st = ScaleRows(st, Sigmoid(MatMul(st, p[2])));
    const Var z = ConcatRows(std::vector<Var>{RowSelect(st, 0), RowSelect(st, 4)});
    const Var logits = Add(Scale(MatMulNT(z, p[3]), 1.5), p[4]);
    return Add(SoftmaxCrossEntropy(logits, 3), Scale(Sum(Mul(h, h)), 0.1));
  };
  const auto r = FiniteDiffCheck(f, params);
  CHECK(r.max_relative_error < 1e-6);
}

TEST_CASE("softmax cross entropy: normalization and shift invariance") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor logits = RandomTensor(rng, 1, 6, 20.0);
    const auto probs = Softmax(logits.row(0));
    CHECK(std::abs(std::accumulate(probs.begin(), probs.end(), 0.0) - 1.0) < 1e-12);
    Tensor shifted = logits;
    for (double& v : shifted.data()) v += 123.25;
    const auto probs2 = Softmax(shifted.row(0));
    for (std::size_t k = 0; k < probs.size(); ++k) CHECK(std::abs(probs[k] - probs2[k]) < 1e-12);

    Tape t;
    const double a = t.value(SoftmaxCrossEntropy(t.Constant(logits), 2)).item();
    const double b = t.value(SoftmaxCrossEntropy(t.Constant(shifted), 2)).item();
    CHECK(std::abs(a - b) < 1e-10);
    CHECK(std::abs(a + std::log(probs[2])) < 1e-12);
  }
  // Large logits stay finite.
  Tape t;
  const double big = t.value(SoftmaxCrossEntropy(t.Constant(Tensor::FromRows({{1000, -1000}})), 1)).item();
  CHECK(big == doctest::Approx(2000));
}

TEST_CASE("backward is linear") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor w0 = RandomTensor(rng, 3, 2);
    const Tensor x0 = RandomTensor(rng, 2, 3);
    const double a = rng.UniformReal(-2, 2), b = rng.UniformReal(-2, 2);
    auto fg = [&](double ca, double cb) {
      Tape t;
      const Var w = t.Param(w0);
      const Var x = t.Constant(x0);
      const Var f = Sum(Sigmoid(MatMul(x, w)));
      const Var g = SoftmaxCrossEntropy(RowSelect(MatMulNT(w, w), 1), 0);
      t.Backward(Add(Scale(f, ca), Scale(g, cb)));
      return t.grad(w);
    };
    const Tensor combined = fg(a, b);
    const Tensor gf = fg(1, 0), gg = fg(0, 1);
    for (std::size_t k = 0; k < combined.size(); ++k) {
      CHECK(std::abs(combined[k] - (a * gf[k] + b * gg[k])) < 1e-12);
    }
  }
}

TEST_CASE("ops are bit-for-bit deterministic") {
  Rng rng(2);
  const Tensor a = RandomTensor(rng, 7, 5), b = RandomTensor(rng, 5, 9);
  auto run = [&] {
    Tape t;
    const Var w = t.Param(b);
    const Var loss = Sum(SoftmaxRows(MatMul(t.Constant(a), w)));
    t.Backward(Scale(loss, 1.0));
    return std::make_pair(t.value(loss).item(), t.grad(w));
  };
  const auto x = run(), y = run();
  CHECK(x.first == y.first);
  CHECK(x.second == y.second);
}

TEST_CASE("tape records in topological order") {
  Tape t;
  const Var a = t.Param(Tensor::Scalar(1));
  const Var b = Scale(a, 2);
  const Var c = Add(a, b);
  CHECK(a.id < b.id);
  CHECK(b.id < c.id);
  CHECK(t.size() == 3);
}
