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

#include "gmrc/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "gmrc/errors.hpp"

namespace gmrc {
namespace {

Tape& TapeOf(Var a) {
  if (a.tape == nullptr) Fail(ErrorCode::kContract, "variable has no tape");
  return *a.tape;
}

Tape& SameTape(Var a, Var b) {
  if (a.tape != b.tape) {
    Fail(ErrorCode::kContract, "variables recorded on different tapes");
  }
  return TapeOf(a);
}

[[noreturn]] void ShapeMismatch(const char* op, const Tensor& a, const Tensor& b) {
  Fail(ErrorCode::kDimension, std::string(op) + ": incompatible shapes " +
                                  a.ShapeString() + " and " + b.ShapeString());
}

double SigmoidScalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::Constant(Tensor value) {
  return Record("constant", std::move(value), {}, nullptr);
}

Var Tape::Param(Tensor value) {
  Var v = Record("param", std::move(value), {}, nullptr);
  nodes_[v.id].requires_grad = true;
  return v;
}

Var Tape::Record(const char* op, Tensor value, std::initializer_list<Var> inputs,
                 BackwardFn backward) {
  return Record(op, std::move(value),
                std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(backward));
}

Var Tape::Record(const char* op, Tensor value, std::span<const Var> inputs,
                 BackwardFn backward) {
  if (!value.AllFinite()) {
    Fail(ErrorCode::kNumeric, std::string(op) + " produced a non-finite value");
  }
  Node node;
  node.value = std::move(value);
  for (const Var& in : inputs) {
    if (in.tape != this) Fail(ErrorCode::kContract, "input from another tape");
    node.requires_grad = node.requires_grad || nodes_[in.id].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

Tensor& Tape::MutableGrad(Var v) {
  Node& node = nodes_[v.id];
  if (node.grad.size() != node.value.size() ||
      node.grad.rows() != node.value.rows()) {
    node.grad = Tensor(node.value.rows(), node.value.cols());
  }
  return node.grad;
}

const Tensor& Tape::grad(Var v) { return MutableGrad(v); }

void Tape::Backward(Var loss) {
  if (loss.tape != this) Fail(ErrorCode::kContract, "loss is not on this tape");
  const Tensor& lv = nodes_[loss.id].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    Fail(ErrorCode::kContract,
         "backward needs a scalar loss, got " + lv.ShapeString());
  }
  MutableGrad(loss)[0] += 1.0;
  for (std::size_t id = loss.id + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.requires_grad || !node.backward) continue;
    if (node.grad.size() == 0 && node.value.size() != 0) continue;
    node.backward(*this, id);
  }
}

Var MatMul(Var a, Var b) {
  Tape& t = SameTape(a, b);
  const Tensor& A = t.value(a);
  const Tensor& B = t.value(b);
  if (A.cols() != B.rows()) ShapeMismatch("matmul", A, B);
  Tensor out(A.rows(), B.cols());
  Gemm(A, false, B, false, out, false);
  return t.Record("matmul", std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    if (t.requires_grad(a)) Gemm(g, false, t.value(b), true, t.MutableGrad(a), true);
    if (t.requires_grad(b)) Gemm(t.value(a), true, g, false, t.MutableGrad(b), true);
  });
}

Var MatMulNT(Var a, Var b) {
  Tape& t = SameTape(a, b);
  const Tensor& A = t.value(a);
  const Tensor& B = t.value(b);
  if (A.cols() != B.cols()) ShapeMismatch("matmul_nt", A, B);
  Tensor out(A.rows(), B.rows());
  Gemm(A, false, B, true, out, false);
  return t.Record("matmul_nt", std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    if (t.requires_grad(a)) Gemm(g, false, t.value(b), false, t.MutableGrad(a), true);
    if (t.requires_grad(b)) Gemm(g, true, t.value(a), false, t.MutableGrad(b), true);
  });
}

Var Add(Var a, Var b) {
  Tape& t = SameTape(a, b);
  const Tensor& A = t.value(a);
  const Tensor& B = t.value(b);
  if (A.rows() != B.rows() || A.cols() != B.cols()) ShapeMismatch("add", A, B);
  Tensor out = A;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += B[i];
  return t.Record("add", std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    for (Var v : {a, b}) {
      if (!t.requires_grad(v)) continue;
      Tensor& dv = t.MutableGrad(v);
      for (std::size_t i = 0; i < g.size(); ++i) dv[i] += g[i];
    }
  });
}

Var Scale(Var a, double s) {
  Tape& t = TapeOf(a);
  Tensor out = t.value(a);
  for (double& v : out.data()) v *= s;
  return t.Record("scale", std::move(out), {a}, [a, s](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    Tensor& da = t.MutableGrad(a);
    for (std::size_t i = 0; i < g.size(); ++i) da[i] += s * g[i];
  });
}

Var Mul(Var a, Var b) {
  Tape& t = SameTape(a, b);
  const Tensor& A = t.value(a);
  const Tensor& B = t.value(b);
  if (A.rows() != B.rows() || A.cols() != B.cols()) ShapeMismatch("mul", A, B);
  Tensor out = A;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= B[i];
  return t.Record("mul", std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    if (t.requires_grad(a)) {
      Tensor& da = t.MutableGrad(a);
      const Tensor& bv = t.value(b);
      for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * bv[i];
    }
    if (t.requires_grad(b)) {
      Tensor& db = t.MutableGrad(b);
      const Tensor& av = t.value(a);
      for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i] * av[i];
    }
  });
}

Var Relu(Var x) {
  Tape& t = TapeOf(x);
  Tensor out = t.value(x);
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return t.Record("relu", std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    const Tensor& xv = t.value(x);
    Tensor& dx = t.MutableGrad(x);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (xv[i] > 0.0) dx[i] += g[i];
    }
  });
}

Var Sigmoid(Var x) {
  Tape& t = TapeOf(x);
  Tensor out = t.value(x);
  for (double& v : out.data()) v = SigmoidScalar(v);
  return t.Record("sigmoid", std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    const Tensor& y = t.value(Var{&t, self});
    Tensor& dx = t.MutableGrad(x);
    for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var ConcatRows(std::span<const Var> parts) {
  if (parts.empty()) Fail(ErrorCode::kContract, "concat_rows of nothing");
  Tape& t = TapeOf(parts[0]);
  std::size_t width = 0;
  for (const Var& p : parts) {
    const Tensor& v = SameTape(parts[0], p).value(p);
    if (v.rows() != 1) {
      Fail(ErrorCode::kDimension, "concat_rows expects 1xN rows, got " + v.ShapeString());
    }
    width += v.cols();
  }
  Tensor out(1, width);
  std::size_t off = 0;
  for (const Var& p : parts) {
    const Tensor& v = t.value(p);
    std::copy(v.data().begin(), v.data().end(), out.data().begin() + off);
    off += v.cols();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.Record("concat_rows", std::move(out), parts, [inputs](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    std::size_t off = 0;
    for (const Var& p : inputs) {
      const std::size_t w = t.value(p).cols();
      if (t.requires_grad(p)) {
        Tensor& dp = t.MutableGrad(p);
        for (std::size_t j = 0; j < w; ++j) dp[j] += g[off + j];
      }
      off += w;
    }
  });
}

Var StackRows(std::span<const Var> parts) {
  if (parts.empty()) Fail(ErrorCode::kContract, "stack_rows of nothing");
  Tape& t = TapeOf(parts[0]);
  const std::size_t cols = t.value(parts[0]).cols();
  std::size_t rows = 0;
  for (const Var& p : parts) {
    const Tensor& v = SameTape(parts[0], p).value(p);
    if (v.cols() != cols) ShapeMismatch("stack_rows", t.value(parts[0]), v);
    rows += v.rows();
  }
  Tensor out(rows, cols);
  std::size_t off = 0;
  for (const Var& p : parts) {
    const Tensor& v = t.value(p);
    std::copy(v.data().begin(), v.data().end(), out.data().begin() + off);
    off += v.size();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.Record("stack_rows", std::move(out), parts, [inputs](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    std::size_t off = 0;
    for (const Var& p : inputs) {
      const std::size_t sz = t.value(p).size();
      if (t.requires_grad(p)) {
        Tensor& dp = t.MutableGrad(p);
        for (std::size_t j = 0; j < sz; ++j) dp[j] += g[off + j];
      }
      off += sz;
    }
  });
}

Var RowSelect(Var x, std::size_t i) {
  Tape& t = TapeOf(x);
  const Tensor& X = t.value(x);
  if (i >= X.rows()) {
    Fail(ErrorCode::kIndex, "row_select: row " + std::to_string(i) +
                                " outside " + X.ShapeString());
  }
  Tensor out(1, X.cols());
  std::copy(X.row(i).begin(), X.row(i).end(), out.data().begin());
  return t.Record("row_select", std::move(out), {x}, [x, i](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    auto dst = t.MutableGrad(x).row(i);
    for (std::size_t j = 0; j < g.size(); ++j) dst[j] += g[j];
  });
}

Var GatherRows(Var table, std::span<const std::int32_t> ids) {
  Tape& t = TapeOf(table);
  const Tensor& E = t.value(table);
  Tensor out(ids.size(), E.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || static_cast<std::size_t>(ids[r]) >= E.rows()) {
      Fail(ErrorCode::kVocab, "id " + std::to_string(ids[r]) +
                                  " outside embedding table " + E.ShapeString());
    }
    std::copy(E.row(ids[r]).begin(), E.row(ids[r]).end(), out.row(r).begin());
  }
  std::vector<std::int32_t> idv(ids.begin(), ids.end());
  return t.Record("gather_rows", std::move(out), {table},
                  [table, idv](Tape& t, std::size_t self) {
                    const Tensor& g = t.node_grad(self);
                    Tensor& dE = t.MutableGrad(table);
                    for (std::size_t r = 0; r < idv.size(); ++r) {
                      auto dst = dE.row(idv[r]);
                      auto src = g.row(r);
                      for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
                    }
                  });
}

Var WeightedRows(Var x, const std::vector<std::vector<std::size_t>>& lists,
                 const std::vector<std::vector<double>>& weights) {
  Tape& t = TapeOf(x);
  const Tensor& X = t.value(x);
  if (lists.size() != weights.size()) {
    Fail(ErrorCode::kDimension, "weighted_rows: lists and weights differ in length");
  }
  const std::size_t d = X.cols();
  Tensor out(lists.size(), d);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (lists[i].size() != weights[i].size()) {
      Fail(ErrorCode::kDimension, "weighted_rows: ragged weights at row " +
                                      std::to_string(i));
    }
    auto dst = out.row(i);
    for (std::size_t k = 0; k < lists[i].size(); ++k) {
      const std::size_t j = lists[i][k];
      if (j >= X.rows()) {
        Fail(ErrorCode::kIndex, "weighted_rows: row " + std::to_string(j) +
                                    " outside " + X.ShapeString());
      }
      const double w = weights[i][k];
      auto src = X.row(j);
      for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
    }
  }
  return t.Record("weighted_rows", std::move(out), {x},
                  [x, lists, weights](Tape& t, std::size_t self) {
                    const Tensor& g = t.node_grad(self);
                    Tensor& dx = t.MutableGrad(x);
                    for (std::size_t i = 0; i < lists.size(); ++i) {
                      auto src = g.row(i);
                      for (std::size_t k = 0; k < lists[i].size(); ++k) {
                        auto dst = dx.row(lists[i][k]);
                        const double w = weights[i][k];
                        for (std::size_t c = 0; c < src.size(); ++c) dst[c] += w * src[c];
                      }
                    }
                  });
}

Var MeanRows(Var x, const std::vector<std::vector<std::size_t>>& lists) {
  std::vector<std::vector<double>> weights;
  weights.reserve(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (lists[i].empty()) {
      Fail(ErrorCode::kContract,
           "mean_rows: empty index list at row " + std::to_string(i));
    }
    weights.emplace_back(lists[i].size(), 1.0 / static_cast<double>(lists[i].size()));
  }
  return WeightedRows(x, lists, weights);
}

Var ScaleRows(Var x, Var g) {
  Tape& t = SameTape(x, g);
  const Tensor& X = t.value(x);
  const Tensor& G = t.value(g);
  if (G.cols() != 1 || G.rows() != X.rows()) ShapeMismatch("scale_rows", X, G);
  Tensor out = X;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (double& v : out.row(i)) v *= G[i];
  }
  return t.Record("scale_rows", std::move(out), {x, g}, [x, g](Tape& t, std::size_t self) {
    const Tensor& dy = t.node_grad(self);
    const Tensor& X = t.value(x);
    const Tensor& G = t.value(g);
    if (t.requires_grad(x)) {
      Tensor& dx = t.MutableGrad(x);
      for (std::size_t i = 0; i < X.rows(); ++i) {
        auto src = dy.row(i);
        auto dst = dx.row(i);
        for (std::size_t c = 0; c < src.size(); ++c) dst[c] += G[i] * src[c];
      }
    }
    if (t.requires_grad(g)) {
      Tensor& dg = t.MutableGrad(g);
      for (std::size_t i = 0; i < X.rows(); ++i) {
        auto a = dy.row(i);
        auto b = X.row(i);
        double s = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
        dg[i] += s;
      }
    }
  });
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

Var SoftmaxRows(Var x) {
  Tape& t = TapeOf(x);
  const Tensor& X = t.value(x);
  Tensor out(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto p = Softmax(X.row(i));
    std::copy(p.begin(), p.end(), out.row(i).begin());
  }
  return t.Record("softmax_rows", std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Tensor& g = t.node_grad(self);
    const Tensor& y = t.value(Var{&t, self});
    Tensor& dx = t.MutableGrad(x);
    for (std::size_t i = 0; i < y.rows(); ++i) {
      auto yr = y.row(i);
      auto gr = g.row(i);
      double dot = 0.0;
      for (std::size_t c = 0; c < yr.size(); ++c) dot += yr[c] * gr[c];
      auto dst = dx.row(i);
      for (std::size_t c = 0; c < yr.size(); ++c) dst[c] += yr[c] * (gr[c] - dot);
    }
  });
}

Var Sum(Var x) {
  Tape& t = TapeOf(x);
  double s = 0.0;
  for (double v : t.value(x).data()) s += v;
  return t.Record("sum", Tensor::Scalar(s), {x}, [x](Tape& t, std::size_t self) {
    const double g = t.node_grad(self)[0];
    for (double& v : t.MutableGrad(x).data()) v += g;
  });
}

Var SoftmaxCrossEntropy(Var logits, std::size_t gold) {
  Tape& t = TapeOf(logits);
  const Tensor& L = t.value(logits);
  if (L.rows() != 1) {
    Fail(ErrorCode::kDimension,
         "softmax_cross_entropy expects 1xK logits, got " + L.ShapeString());
  }
  if (gold >= L.cols()) {
    Fail(ErrorCode::kSchema, "gold index " + std::to_string(gold) +
                                 " outside " + std::to_string(L.cols()) + " labels");
  }
  const double m = *std::max_element(L.data().begin(), L.data().end());
  double z = 0.0;
  for (double v : L.data()) z += std::exp(v - m);
  const double loss = (m + std::log(z)) - L[gold];
  return t.Record("softmax_cross_entropy", Tensor::Scalar(loss), {logits},
                  [logits, gold](Tape& t, std::size_t self) {
                    const double g = t.node_grad(self)[0];
                    const auto p = Softmax(t.value(logits).row(0));
                    Tensor& dl = t.MutableGrad(logits);
                    for (std::size_t k = 0; k < p.size(); ++k) {
                      dl[k] += g * (p[k] - (k == gold ? 1.0 : 0.0));
                    }
                  });
}

GradCheckResult FiniteDiffCheck(const LossBuilder& f, std::vector<Tensor> params,
                                double epsilon) {
  if (!(epsilon > 0.0)) Fail(ErrorCode::kContract, "epsilon must be positive");
  auto evaluate = [&f](const std::vector<Tensor>& ps) {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& p : ps) vars.push_back(tape.Constant(p));
    const double v = tape.value(f(tape, vars)).item();
    if (!std::isfinite(v)) Fail(ErrorCode::kNumeric, "objective is not finite");
    return v;
  };

  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& p : params) vars.push_back(tape.Param(p));
    Var loss = f(tape, vars);
    tape.Backward(loss);
    for (Var v : vars) analytic.push_back(tape.grad(v));
  }

  GradCheckResult result;
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t i = 0; i < params[p].size(); ++i) {
      const double saved = params[p][i];
      params[p][i] = saved + epsilon;
      const double up = evaluate(params);
      params[p][i] = saved - epsilon;
      const double down = evaluate(params);
      params[p][i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic[p][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      const double rel = std::abs(a - numeric) / denom;
      if (rel >= result.max_relative_error) result = {rel, p, i, a, numeric};
    }
  }
  return result;
}

}  // namespace gmrc
