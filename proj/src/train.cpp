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

#include "gmrc/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "gmrc/errors.hpp"
#include "gmrc/rng.hpp"
#include "json.hpp"

namespace gmrc {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json OptionalNumber(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json SummaryJson(const Summary& s) {
  ordered_json o;
  o["mean"] = s.mean;
  o["std"] = s.std;
  o["n"] = s.n;
  return o;
}

}  // namespace

EncoderConfig EffectiveEncoder(const TrainConfig& cfg) {
  EncoderConfig enc = cfg.encoder;
  if (cfg.graph_source == GraphSource::kNone) enc.graph_encoder = GraphEncoderKind::kNoGraph;
  return enc;
}

AdamState InitAdam(const ModelParams& params) {
  AdamState s;
  for (const auto& [name, t] : params.Named()) {
    s.m.emplace_back(t->rows(), t->cols());
    s.v.emplace_back(t->rows(), t->cols());
  }
  return s;
}

double RunEpoch(ModelParams& params, AdamState& adam, const std::vector<PreparedItem>& items,
                const std::vector<std::size_t>& order, const TrainConfig& cfg) {
  const EncoderConfig enc = EffectiveEncoder(cfg);
  auto named = params.Named();
  if (adam.m.size() != named.size()) Fail(ErrorCode::kContract, "optimizer state does not match params");
  double total_loss = 0.0;
  for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
    const std::size_t end = std::min(order.size(), start + cfg.batch_size);
    const double inv = 1.0 / static_cast<double>(end - start);
    std::vector<Tensor> grads;
    for (const auto& [name, t] : named) grads.emplace_back(t->rows(), t->cols());
    double batch_loss = 0.0;
    try {
      for (std::size_t b = start; b < end; ++b) {
        const PreparedItem& item = items[order[b]];
        Tape tape;
        const ModelVars vars = RecordParams(tape, params, true);
        const Var loss =
            SoftmaxCrossEntropy(ModelLogits(item.seq, item.graph, vars, enc), item.gold);
        tape.Backward(loss);
        batch_loss += tape.value(loss).item();
        for (std::size_t k = 0; k < grads.size(); ++k) {
          const auto& g = tape.grad(vars.all[k]).data();
          auto& acc = grads[k].data();
          for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g[i];
        }
      }
      if (!std::isfinite(batch_loss)) Fail(ErrorCode::kNumeric, "loss is not finite");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumeric) throw;
      std::string ids;
      for (std::size_t b = start; b < end; ++b) ids += (b > start ? "," : "") + items[order[b]].id;
      Fail(ErrorCode::kNumeric, std::string(e.what()) + "; batch: [" + ids + "]");
    }
    total_loss += batch_loss;

    ++adam.step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.step));
    for (std::size_t k = 0; k < named.size(); ++k) {
      auto& w = named[k].second->data();
      auto& m = adam.m[k].data();
      auto& v = adam.v[k].data();
      const auto& g = grads[k].data();
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double gi = g[i] * inv;
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gi;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * gi * gi;
        w[i] -= cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.adam_epsilon);
      }
    }
  }
  return order.empty() ? 0.0 : total_loss / static_cast<double>(order.size());
}

EvalResult Evaluate(const ModelParams& params, const EncoderConfig& enc,
                    const std::vector<PreparedItem>& items, const RelationSchema& schema) {
  EvalResult r;
  std::vector<Prediction> mention, pronoun;
  for (const PreparedItem& item : items) {
    Prediction p = Predict(item.seq, item.graph, params, enc, item.gold, item.id);
    (item.pronoun ? pronoun : mention).push_back(p);
    r.predictions.push_back(std::move(p));
  }
  r.n_mention = mention.size();
  r.n_pronoun = pronoun.size();
  if (items.empty()) return r;
  r.micro_f1 = MicroF1(r.predictions, schema);
  r.macro_f1 = MacroF1(r.predictions, schema);
  r.mean_loss = MeanLoss(r.predictions);
  if (!mention.empty()) r.mention_micro_f1 = MicroF1(mention, schema);
  if (!pronoun.empty()) r.pronoun_micro_f1 = MicroF1(pronoun, schema);
  return r;
}

Summary Summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

SeedResult TrainSeed(const TrainConfig& cfg, const Dataset& ds, std::uint64_t seed,
                     ModelParams* params_out) {
  CheckTrainConfig(cfg);
  const EncoderConfig enc = EffectiveEncoder(cfg);
  ModelParams params = InitParams(enc, ds.vocab.size(), ds.schema.size(), MixSeed(seed, 1));
  AdamState adam = InitAdam(params);
  Rng shuffle(MixSeed(seed, 2));
  std::vector<std::size_t> order(ds.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  SeedResult result;
  result.seed = seed;
  ModelParams best = params;
  double best_dev = -1.0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle.Shuffle(order);
    result.epoch_losses.push_back(RunEpoch(params, adam, ds.train.items, order, cfg));
    if (ds.has_dev && ds.dev.size() > 0) {
      const double f1 = Evaluate(params, enc, ds.dev.items, ds.schema).micro_f1;
      result.dev_micro_f1.push_back(f1);
      if (f1 > best_dev) {
        best_dev = f1;
        best = params;
        result.best_epoch = epoch;
      }
    }
  }
  if (result.best_epoch == 0) {
    best = std::move(params);
    result.best_epoch = cfg.epochs;
  }
  const EvalResult test = Evaluate(best, enc, ds.test.items, ds.schema);
  result.micro_f1 = test.micro_f1;
  result.macro_f1 = test.macro_f1;
  result.mention_micro_f1 = test.mention_micro_f1;
  result.pronoun_micro_f1 = test.pronoun_micro_f1;
  if (params_out) *params_out = std::move(best);
  return result;
}

ExperimentReport Train(const TrainConfig& cfg, const Dataset& ds,
                       std::vector<ModelParams>* params_out) {
  CheckTrainConfig(cfg);
  const auto start = std::chrono::steady_clock::now();
  const EncoderConfig enc = EffectiveEncoder(cfg);
  ExperimentReport report;
  report.config = cfg;
  report.params = CountParams(InitParams(enc, ds.vocab.size(), ds.schema.size(), 0), enc);
  report.n_train = ds.train.size();
  report.n_dev = ds.dev.size();
  report.n_test = ds.test.size();
  report.n_rejected = ds.train.n_rejected() + ds.dev.n_rejected() + ds.test.n_rejected();
  for (const PreparedItem& item : ds.test.items) (item.pronoun ? report.n_pronoun : report.n_mention)++;

  const std::size_t n = cfg.seeds.size();
  report.seeds.resize(n);
  std::vector<ModelParams> params(params_out ? n : 0);
  std::vector<std::exception_ptr> errors(n);
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&]() {
    while (true) {
      std::size_t k;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= n) return;
        k = next++;
      }
      try {
        report.seeds[k] = TrainSeed(cfg, ds, cfg.seeds[k], params_out ? &params[k] : nullptr);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> micro, macro, mention, pronoun;
  for (const SeedResult& s : report.seeds) {
    micro.push_back(s.micro_f1);
    macro.push_back(s.macro_f1);
    if (s.mention_micro_f1) mention.push_back(*s.mention_micro_f1);
    if (s.pronoun_micro_f1) pronoun.push_back(*s.pronoun_micro_f1);
  }
  report.micro_f1 = Summarize(micro);
  report.macro_f1 = Summarize(macro);
  report.mention_micro_f1 = Summarize(mention);
  report.pronoun_micro_f1 = Summarize(pronoun);
  if (params_out) *params_out = std::move(params);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExperimentReport TrainFromConfig(const TrainConfig& cfg, std::vector<ModelParams>* params_out) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset ds = LoadDataset(cfg);
  ExperimentReport report = Train(cfg, ds, params_out);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string ReportToJson(const ExperimentReport& r, bool include_wall_time, int indent) {
  ordered_json o;
  o["format"] = "gmrc-report";
  o["version"] = 1;
  if (!r.label.empty()) o["label"] = r.label;
  o["config"] = ordered_json::parse(TrainConfigToJson(r.config));
  ordered_json params;
  params["graph_encoder_params"] = r.params.graph_encoder_params;
  params["total_params"] = r.params.total_params;
  o["params"] = std::move(params);
  o["n_train"] = r.n_train;
  o["n_dev"] = r.n_dev;
  o["n_test"] = r.n_test;
  o["n_mention"] = r.n_mention;
  o["n_pronoun"] = r.n_pronoun;
  o["n_rejected"] = r.n_rejected;
  ordered_json seeds = ordered_json::array();
  for (const SeedResult& s : r.seeds) {
    ordered_json e;
    e["seed"] = s.seed;
    e["micro_f1"] = s.micro_f1;
    e["macro_f1"] = s.macro_f1;
    e["mention_micro_f1"] = OptionalNumber(s.mention_micro_f1);
    e["pronoun_micro_f1"] = OptionalNumber(s.pronoun_micro_f1);
    e["best_epoch"] = s.best_epoch;
    e["epoch_losses"] = s.epoch_losses;
    e["dev_micro_f1"] = s.dev_micro_f1;
    seeds.push_back(std::move(e));
  }
  o["seeds"] = std::move(seeds);
  o["micro_f1"] = SummaryJson(r.micro_f1);
  o["macro_f1"] = SummaryJson(r.macro_f1);
  o["mention_micro_f1"] = SummaryJson(r.mention_micro_f1);
  o["pronoun_micro_f1"] = SummaryJson(r.pronoun_micro_f1);
  if (include_wall_time) o["wall_time_seconds"] = r.wall_time_seconds;
  return o.dump(indent);
}

std::vector<double> SeedScoresFromJson(std::string_view report_json, const std::string& metric) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(report_json);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("report is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("seeds") || !root["seeds"].is_array()) {
    Fail(ErrorCode::kSchema, "report has no \"seeds\" array");
  }
  std::vector<double> out;
  for (const auto& s : root["seeds"]) {
    if (!s.contains(metric)) Fail(ErrorCode::kSchema, "seed entry lacks \"" + metric + "\"");
    if (s[metric].is_null()) continue;
    out.push_back(s[metric].get<double>());
  }
  return out;
}

}  // namespace gmrc
