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

// Entity-pair classification head, loss, prediction and F1 metrics.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmrc/autodiff.hpp"
#include "gmrc/encoders.hpp"
#include "gmrc/graph.hpp"
#include "gmrc/tokenize.hpp"

namespace gmrc {

class RelationSchema {
 public:
  RelationSchema() = default;
  // Labels must be unique; na_label, when given, must be one of them.
  RelationSchema(std::vector<std::string> labels,
                 std::optional<std::string> na_label = std::nullopt);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<std::string>& na_label() const { return na_label_; }
  // Index of the NA label, if any.
  std::optional<std::size_t> na_index() const { return na_index_; }

  std::size_t Index(const std::string& label) const;  // throws SchemaError
  const std::string& Label(std::size_t index) const { return labels_.at(index); }
  bool IsNa(std::size_t index) const { return na_index_ && *na_index_ == index; }

 private:
  std::vector<std::string> labels_;
  std::optional<std::string> na_label_;
  std::optional<std::size_t> na_index_;
  std::map<std::string, std::size_t> index_;
};

struct Prediction {
  std::string instance_id;
  std::vector<double> probabilities;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

// Rows of the opening subject/object markers.
std::pair<Var, Var> ExtractEntityReps(Var h_out, const MarkedSequence& seq);

// logits = W_r ReLU(W_proj [h_subj, h_obj]) + b_r, as a 1 x K row.
Var ClassifierLogits(Var h_subj, Var h_obj, const ModelVars& p);

// Full forward pass: sequence encoder -> graph encoder -> head.
Var ModelLogits(const MarkedSequence& seq, const SubwordGraph& sg,
                const ModelVars& p, const EncoderConfig& cfg);

// Argmax with ties broken by the lowest index.
std::size_t Argmax(std::span<const double> values);

Prediction Predict(const MarkedSequence& seq, const SubwordGraph& sg,
                   const ModelParams& params, const EncoderConfig& cfg,
                   std::size_t gold, const std::string& instance_id = "");

// -log P(gold | x).
double NegLogLikelihood(const Prediction& p);
double MeanLoss(std::span<const Prediction> preds);

// Micro-F1 over non-NA labels: predicted-positive iff argmax != NA,
// correct iff argmax == gold != NA. Zero denominators give 0.
double MicroF1(std::span<const Prediction> preds, const RelationSchema& schema);
// Unweighted mean of per-relation F1 over the non-NA labels.
double MacroF1(std::span<const Prediction> preds, const RelationSchema& schema);

std::string SerializePredictionJson(const Prediction& p,
                                    const RelationSchema& schema);

}  // namespace gmrc
