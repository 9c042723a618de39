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

// Fixture access and independent reference implementations used as test
// oracles.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmrc/encoders.hpp"
#include "gmrc/graph.hpp"
#include "gmrc/rng.hpp"
#include "gmrc/tensor.hpp"

namespace gmrc::testing {

inline std::string FixturePath(const std::string& name) {
  return std::string(GMRC_FIXTURE_DIR) + "/" + name;
}

inline std::string ReadFixture(const std::string& name) {
  std::ifstream in(FixturePath(name), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Fresh scratch directory under the system temp dir.
inline std::string ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gmrc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline Tensor RandomTensor(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Tensor t(r, c);
  for (double& v : t.data()) v = rng.UniformReal(-scale, scale);
  return t;
}

// Random undirected graph over n nodes given as a SubwordGraph.
inline SubwordGraph RandomGraph(Rng& rng, std::size_t n, double p, bool self_loops = true) {
  SubwordGraph g(n, self_loops);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.Bernoulli(p)) g.AddEdge(i, j, EdgeKind::kDependency);
    }
  }
  return g;
}

// Per-node loop over the propagation, stacking and gating equations,
// written without any of the library's tensor ops.
inline std::vector<std::vector<double>> NaiveDagnnPlus(
    const std::vector<std::vector<double>>& h,
    const std::vector<std::vector<std::size_t>>& neighbors, const std::vector<double>& w,
    std::size_t layers, Activation act) {
  const std::size_t n = h.size();
  const std::size_t d = w.size();
  std::vector<std::vector<std::vector<double>>> q(layers + 1);
  q[0] = h;
  for (std::size_t l = 1; l <= layers; ++l) {
    q[l].assign(n, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : neighbors[i]) {
        for (std::size_t k = 0; k < d; ++k) q[l][i][k] += q[l - 1][j][k];
      }
      for (std::size_t k = 0; k < d; ++k) {
        double v = q[l][i][k] / static_cast<double>(neighbors[i].size());
        if (act == Activation::kRelu) v = v > 0 ? v : 0;
        if (act == Activation::kSigmoid) v = 1.0 / (1.0 + std::exp(-v));
        q[l][i][k] = v;
      }
    }
  }
  std::vector<std::vector<double>> out(n, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l <= layers; ++l) {
      double z = 0.0;
      for (std::size_t k = 0; k < d; ++k) z += q[l][i][k] * w[k];
      const double s = 1.0 / (1.0 + std::exp(-z));
      for (std::size_t k = 0; k < d; ++k) out[i][k] += s * q[l][i][k];
    }
  }
  return out;
}

inline std::vector<std::vector<double>> Rows(const Tensor& t) {
  std::vector<std::vector<double>> out(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) out[i].assign(t.row(i).begin(), t.row(i).end());
  return out;
}

// Max over pairs of Euclidean row distances.
inline double MaxPairwiseDistance(const std::vector<std::vector<double>>& rows) {
  double best = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rows[i].size(); ++k) {
        s += (rows[i][k] - rows[j][k]) * (rows[i][k] - rows[j][k]);
      }
      best = std::max(best, std::sqrt(s));
    }
  }
  return best;
}

}  // namespace gmrc::testing
