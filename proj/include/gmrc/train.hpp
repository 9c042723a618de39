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

// Adam training over prepared datasets and the multi-seed experiment report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmrc/config.hpp"
#include "gmrc/dataset.hpp"
#include "gmrc/encoders.hpp"
#include "gmrc/rc_model.hpp"

namespace gmrc {

// The encoder actually trained: graph source "none" forces NoGraph.
EncoderConfig EffectiveEncoder(const TrainConfig& cfg);

struct AdamState {
  std::vector<Tensor> m, v;
  std::size_t step = 0;
};

AdamState InitAdam(const ModelParams& params);

// One pass over `order` in mini-batches of cfg.batch_size with batch-mean
// loss. Returns the mean instance loss (0 for an empty order). A non-finite
// loss aborts with a NumericError listing the batch's instance ids.
double RunEpoch(ModelParams& params, AdamState& adam, const std::vector<PreparedItem>& items,
                const std::vector<std::size_t>& order, const TrainConfig& cfg);

struct EvalResult {
  std::vector<Prediction> predictions;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> mention_micro_f1, pronoun_micro_f1;
  std::size_t n_mention = 0, n_pronoun = 0;
  double mean_loss = 0.0;
};

// Metrics are 0 on an empty split; group metrics are unset for empty groups.
EvalResult Evaluate(const ModelParams& params, const EncoderConfig& enc,
                    const std::vector<PreparedItem>& items, const RelationSchema& schema);

struct SeedResult {
  std::uint64_t seed = 0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> mention_micro_f1, pronoun_micro_f1;
  std::size_t best_epoch = 0;  // 1-based; last epoch without a dev split
  std::vector<double> epoch_losses;
  std::vector<double> dev_micro_f1;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for one seed
  std::size_t n = 0;
};

Summary Summarize(std::span<const double> values);

struct ExperimentReport {
  std::string label;
  TrainConfig config;
  ParamCount params;
  std::vector<SeedResult> seeds;
  Summary micro_f1, macro_f1, mention_micro_f1, pronoun_micro_f1;
  std::size_t n_train = 0, n_dev = 0, n_test = 0;
  std::size_t n_mention = 0, n_pronoun = 0;
  std::size_t n_rejected = 0;
  double wall_time_seconds = 0.0;
};

// Trains one seed; the returned params are the dev-selected (or final) ones.
SeedResult TrainSeed(const TrainConfig& cfg, const Dataset& ds, std::uint64_t seed,
                     ModelParams* params_out = nullptr);

// All seeds of cfg, run on up to cfg.threads threads. params_out receives one
// entry per seed, in seed order.
ExperimentReport Train(const TrainConfig& cfg, const Dataset& ds,
                       std::vector<ModelParams>* params_out = nullptr);

// Loads the dataset named by cfg and trains.
ExperimentReport TrainFromConfig(const TrainConfig& cfg,
                                 std::vector<ModelParams>* params_out = nullptr);

std::string ReportToJson(const ExperimentReport& report, bool include_wall_time = true,
                         int indent = 2);

// Per-seed test micro-F1 values from a report JSON document (the format
// written by ReportToJson).
std::vector<double> SeedScoresFromJson(std::string_view report_json,
                                       const std::string& metric = "micro_f1");

}  // namespace gmrc
