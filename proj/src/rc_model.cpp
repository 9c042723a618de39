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

#include "gmrc/rc_model.hpp"

#include <cmath>

#include "gmrc/errors.hpp"
#include "json.hpp"

namespace gmrc {

RelationSchema::RelationSchema(std::vector<std::string> labels,
                               std::optional<std::string> na_label)
    : labels_(std::move(labels)), na_label_(std::move(na_label)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      Fail(ErrorCode::kSchema, "duplicate relation label \"" + labels_[i] + "\"");
    }
  }
  if (na_label_) {
    auto it = index_.find(*na_label_);
    if (it == index_.end()) {
      Fail(ErrorCode::kSchema,
           "NA label \"" + *na_label_ + "\" is not among the relations");
    }
    na_index_ = it->second;
  }
}

std::size_t RelationSchema::Index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    Fail(ErrorCode::kSchema, "unknown relation label \"" + label + "\"");
  }
  return it->second;
}

std::pair<Var, Var> ExtractEntityReps(Var h_out, const MarkedSequence& seq) {
  const std::size_t n = h_out.tape->value(h_out).rows();
  if (seq.subj_anchor >= n || seq.obj_anchor >= n) {
    Fail(ErrorCode::kContract, "entity anchor outside a sequence of " +
                                   std::to_string(n) + " rows");
  }
  return {RowSelect(h_out, seq.subj_anchor), RowSelect(h_out, seq.obj_anchor)};
}

Var ClassifierLogits(Var h_subj, Var h_obj, const ModelVars& p) {
  const Var parts[] = {h_subj, h_obj};
  Var z = Relu(MatMulNT(ConcatRows(parts), p.proj));
  return Add(MatMulNT(z, p.rel_w), p.rel_b);
}

Var ModelLogits(const MarkedSequence& seq, const SubwordGraph& sg,
                const ModelVars& p, const EncoderConfig& cfg) {
  Var h = SeqEncode(seq.subword_ids, p, cfg);
  Var h_out = GraphEncode(h, sg, p, cfg);
  auto [subj, obj] = ExtractEntityReps(h_out, seq);
  return ClassifierLogits(subj, obj, p);
}

std::size_t Argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Prediction Predict(const MarkedSequence& seq, const SubwordGraph& sg,
                   const ModelParams& params, const EncoderConfig& cfg,
                   std::size_t gold, const std::string& instance_id) {
  Tape tape;
  const ModelVars vars = RecordParams(tape, params, false);
  const Var logits = ModelLogits(seq, sg, vars, cfg);
  Prediction pred;
  pred.instance_id = instance_id;
  pred.probabilities = Softmax(tape.value(logits).row(0));
  pred.predicted = Argmax(pred.probabilities);
  pred.gold = gold;
  return pred;
}

double NegLogLikelihood(const Prediction& p) {
  if (p.gold >= p.probabilities.size()) {
    Fail(ErrorCode::kSchema, "gold index outside the label set");
  }
  return -std::log(p.probabilities[p.gold]);
}

double MeanLoss(std::span<const Prediction> preds) {
  if (preds.empty()) Fail(ErrorCode::kContract, "loss of an empty batch");
  double s = 0.0;
  for (const Prediction& p : preds) s += NegLogLikelihood(p);
  return s / static_cast<double>(preds.size());
}

namespace {

double F1(double tp, double predicted, double gold) {
  const double precision = predicted > 0 ? tp / predicted : 0.0;
  const double recall = gold > 0 ? tp / gold : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

void CheckPredictions(std::span<const Prediction> preds, const RelationSchema& schema) {
  if (preds.empty()) Fail(ErrorCode::kContract, "F1 of an empty prediction list");
  for (const Prediction& p : preds) {
    if (p.predicted >= schema.size() || p.gold >= schema.size()) {
      Fail(ErrorCode::kSchema, "prediction label outside the schema");
    }
  }
}

}  // namespace

double MicroF1(std::span<const Prediction> preds, const RelationSchema& schema) {
  CheckPredictions(preds, schema);
  double tp = 0, predicted = 0, gold = 0;
  for (const Prediction& p : preds) {
    const bool pred_pos = !schema.IsNa(p.predicted);
    const bool gold_pos = !schema.IsNa(p.gold);
    predicted += pred_pos;
    gold += gold_pos;
    tp += (pred_pos && p.predicted == p.gold);
  }
  return F1(tp, predicted, gold);
}

double MacroF1(std::span<const Prediction> preds, const RelationSchema& schema) {
  CheckPredictions(preds, schema);
  const std::size_t k = schema.size();
  std::vector<double> tp(k), predicted(k), gold(k);
  for (const Prediction& p : preds) {
    predicted[p.predicted] += 1;
    gold[p.gold] += 1;
    if (p.predicted == p.gold) tp[p.gold] += 1;
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < k; ++r) {
    if (schema.IsNa(r)) continue;
    sum += F1(tp[r], predicted[r], gold[r]);
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

std::string SerializePredictionJson(const Prediction& p,
                                    const RelationSchema& schema) {
  nlohmann::ordered_json obj;
  obj["id"] = p.instance_id;
  obj["gold"] = schema.Label(p.gold);
  obj["pred"] = schema.Label(p.predicted);
  obj["probs"] = p.probabilities;
  return obj.dump();
}

}  // namespace gmrc
