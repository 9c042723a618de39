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

#include "gmrc/gmrc.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmrc/checkpoint.hpp"
#include "gmrc/config.hpp"
#include "gmrc/dataset.hpp"
#include "gmrc/errors.hpp"
#include "gmrc/experiment.hpp"
#include "gmrc/gmr.hpp"
#include "gmrc/graph.hpp"
#include "gmrc/rng.hpp"
#include "gmrc/synthetic.hpp"
#include "gmrc/tokenize.hpp"
#include "gmrc/train.hpp"
#include "json.hpp"

struct gmrc_graphs {
  std::vector<gmrc::WordGraph> graphs;
};

struct gmrc_config {
  gmrc::TrainConfig config;
};

struct gmrc_report {
  gmrc::ExperimentReport report;
};

namespace {

namespace fs = std::filesystem;

thread_local std::string g_last_error;

gmrc_status SetError(gmrc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
gmrc_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return GMRC_OK;
  } catch (const gmrc::Error& e) {
    return SetError(static_cast<gmrc_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return SetError(GMRC_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return SetError(GMRC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return SetError(GMRC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(GMRC_ERR_INTERNAL, e.what());
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) gmrc::Fail(gmrc::ErrorCode::kIo, "cannot write " + path);
  out << text;
}

std::vector<gmrc::WordGraph> ParseGraphs(const std::string& text, const std::string& format) {
  if (format == "conllu") return gmrc::ParseConllu(text);
  if (format == "jsonl") return gmrc::ParseGraphJsonl(text);
  gmrc::Fail(gmrc::ErrorCode::kConfig, "unknown graph format \"" + format + "\"; use conllu|jsonl");
}

nlohmann::ordered_json ValidationJson(const gmrc::ValidationReport& r) {
  nlohmann::ordered_json o;
  o["framework"] = gmrc::FrameworkName(r.framework);
  o["is_single_headed"] = r.is_single_headed;
  o["is_acyclic"] = r.is_acyclic;
  o["is_connected"] = r.is_connected;
  o["unattached_word_indices"] = r.unattached_word_indices;
  o["violations"] = r.violations;
  return o;
}

nlohmann::ordered_json SequenceJson(const std::string& id, const gmrc::MarkedSequence& seq) {
  nlohmann::ordered_json o;
  o["id"] = id;
  o["subword_ids"] = seq.subword_ids;
  o["surface"] = seq.surface;
  std::vector<long long> words;
  for (std::size_t w : seq.word_of_subword) {
    words.push_back(w == gmrc::kMarker ? -1 : static_cast<long long>(w));
  }
  o["word_of_subword"] = words;
  o["first_subword_of_word"] = seq.first_subword_of_word;
  o["subj_anchor"] = seq.subj_anchor;
  o["obj_anchor"] = seq.obj_anchor;
  return o;
}

gmrc::Vocab VocabFor(const std::string& path, gmrc::MarkerScheme scheme,
                     const std::vector<gmrc::RcInstance>& instances) {
  return gmrc::LoadVocab(path, gmrc::VocabOptionsFor(scheme, {&instances}));
}

}  // namespace

extern "C" {

const char* gmrc_version(void) { return "1.0.0"; }

const char* gmrc_status_string(gmrc_status status) {
  switch (status) {
    case GMRC_OK: return "ok";
    case GMRC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GMRC_ERR_INTERNAL: return "internal error";
    default: break;
  }
  if (status >= GMRC_ERR_PARSE && status <= GMRC_ERR_INSTANCE_REJECTED) {
    return gmrc::ErrorCodeName(static_cast<gmrc::ErrorCode>(status));
  }
  return "unknown status";
}

const char* gmrc_last_error(void) { return g_last_error.c_str(); }

void gmrc_string_free(char* s) { std::free(s); }

gmrc_status gmrc_graphs_parse(const char* text, const char* format, gmrc_graphs** out) {
  if (!text || !format || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    auto handle = std::make_unique<gmrc_graphs>();
    handle->graphs = ParseGraphs(text, format);
    *out = handle.release();
  });
}

gmrc_status gmrc_graphs_read(const char* path, const char* format, gmrc_graphs** out) {
  if (!path || !format || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    auto handle = std::make_unique<gmrc_graphs>();
    handle->graphs = ParseGraphs(gmrc::ReadFile(path), format);
    *out = handle.release();
  });
}

size_t gmrc_graphs_count(const gmrc_graphs* graphs) {
  return graphs ? graphs->graphs.size() : 0;
}

gmrc_status gmrc_graphs_sizes(const gmrc_graphs* graphs, size_t index, size_t* n_words,
                              size_t* n_edges) {
  if (!graphs) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null graphs handle");
  if (index >= graphs->graphs.size()) {
    return SetError(GMRC_ERR_INDEX, "graph index " + std::to_string(index) + " out of range");
  }
  if (n_words) *n_words = graphs->graphs[index].words.size();
  if (n_edges) *n_edges = graphs->graphs[index].edges.size();
  return GMRC_OK;
}

gmrc_status gmrc_graphs_validate(const gmrc_graphs* graphs, size_t index, gmrc_validation* out) {
  if (!graphs || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= graphs->graphs.size()) {
    return SetError(GMRC_ERR_INDEX, "graph index " + std::to_string(index) + " out of range");
  }
  return Guard([&] {
    const gmrc::ValidationReport r = gmrc::ValidateGraph(graphs->graphs[index]);
    out->is_single_headed = r.is_single_headed;
    out->is_acyclic = r.is_acyclic;
    out->is_connected = r.is_connected;
    out->n_unattached = r.unattached_word_indices.size();
    out->n_violations = r.violations.size();
  });
}

gmrc_status gmrc_graphs_validation_json(const gmrc_graphs* graphs, char** out) {
  if (!graphs || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& g : graphs->graphs) list.push_back(ValidationJson(gmrc::ValidateGraph(g)));
    *out = CopyString(list.dump(2));
  });
}

gmrc_status gmrc_graphs_to_jsonl(const gmrc_graphs* graphs, char** out) {
  if (!graphs || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] { *out = CopyString(gmrc::SerializeGraphJsonl(graphs->graphs)); });
}

gmrc_status gmrc_graphs_to_conllu(const gmrc_graphs* graphs, char** out) {
  if (!graphs || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] { *out = CopyString(gmrc::SerializeConllu(graphs->graphs)); });
}

void gmrc_graphs_free(gmrc_graphs* graphs) { delete graphs; }

gmrc_status gmrc_tokenize_file(const char* vocab_path, const char* scheme,
                               const char* instances_path, size_t max_length,
                               char** out_jsonl, size_t* n_rejected) {
  if (!vocab_path || !scheme || !instances_path || !out_jsonl) {
    return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const gmrc::MarkerScheme s = gmrc::ParseMarkerScheme(scheme);
    const auto instances = gmrc::LoadInstances(instances_path);
    const gmrc::Vocab vocab = VocabFor(vocab_path, s, instances);
    std::string text;
    std::size_t rejected = 0;
    for (const auto& inst : instances) {
      try {
        const auto seq = gmrc::Tokenize(gmrc::InsertMarkers(inst, s), vocab, max_length);
        text += SequenceJson(inst.id, seq).dump() + "\n";
      } catch (const gmrc::Error& e) {
        if (e.code() != gmrc::ErrorCode::kInstanceRejected) throw;
        ++rejected;
      }
    }
    if (n_rejected) *n_rejected = rejected;
    *out_jsonl = CopyString(text);
  });
}

gmrc_status gmrc_build_graph_file(const char* gmr_path, const char* instances_path,
                                  const char* vocab_path, const char* scheme, int self_loops,
                                  int prune_punct, int64_t random_seed, char** out_jsonl) {
  if (!gmr_path || !instances_path || !vocab_path || !scheme || !out_jsonl) {
    return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const gmrc::MarkerScheme s = gmrc::ParseMarkerScheme(scheme);
    const auto instances = gmrc::LoadInstances(instances_path);
    const auto graphs = gmrc::LoadGraphs(gmr_path);
    gmrc::CheckJoin(instances, graphs);
    const gmrc::Vocab vocab = VocabFor(vocab_path, s, instances);
    gmrc::GraphOptions options;
    options.self_loops = self_loops != 0;
    options.prune_punct = prune_punct != 0;
    std::string text;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      gmrc::MarkedSequence seq;
      try {
        seq = gmrc::Tokenize(gmrc::InsertMarkers(instances[i], s), vocab);
      } catch (const gmrc::Error& e) {
        if (e.code() != gmrc::ErrorCode::kInstanceRejected) throw;
        continue;
      }
      gmrc::SubwordGraph sg = gmrc::BuildSubwordGraph(graphs[i], seq, options, instances[i].id);
      if (random_seed >= 0) {
        sg = gmrc::RandomizeGraph(sg, gmrc::MixSeed(static_cast<std::uint64_t>(random_seed), i));
      }
      text += gmrc::SerializeSubwordGraphJson(sg, instances[i].id) + "\n";
    }
    *out_jsonl = CopyString(text);
  });
}

gmrc_status gmrc_synth(const char* spec_json, uint64_t seed, const char* out_dir) {
  if (!out_dir) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null output directory");
  return Guard([&] {
    const gmrc::SyntheticSpec spec =
        spec_json ? gmrc::ParseSyntheticSpec(spec_json) : gmrc::SyntheticSpec{};
    gmrc::WriteSynthetic(gmrc::GenerateSynthetic(spec, seed), spec, out_dir);
  });
}

gmrc_status gmrc_config_load(const char* path, gmrc_config** out) {
  if (!path || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    auto handle = std::make_unique<gmrc_config>();
    handle->config = gmrc::LoadTrainConfig(path);
    *out = handle.release();
  });
}

gmrc_status gmrc_config_parse(const char* json, const char* base_dir, gmrc_config** out) {
  if (!json || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    auto handle = std::make_unique<gmrc_config>();
    handle->config = gmrc::ParseTrainConfig(json, base_dir ? base_dir : "");
    *out = handle.release();
  });
}

gmrc_status gmrc_config_to_json(const gmrc_config* config, char** out) {
  if (!config || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] { *out = CopyString(gmrc::TrainConfigToJson(config->config)); });
}

void gmrc_config_free(gmrc_config* config) { delete config; }

gmrc_status gmrc_train(const gmrc_config* config, const char* params_out, gmrc_report** out) {
  if (!config || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    const gmrc::TrainConfig& cfg = config->config;
    const gmrc::Dataset ds = gmrc::LoadDataset(cfg);
    std::vector<gmrc::ModelParams> params;
    auto handle = std::make_unique<gmrc_report>();
    handle->report = gmrc::Train(cfg, ds, params_out ? &params : nullptr);
    if (params_out) {
      gmrc::Checkpoint ckpt;
      ckpt.config = cfg;
      ckpt.relations = ds.schema.labels();
      ckpt.na_label = ds.schema.na_label();
      ckpt.vocab = ds.vocab.entries();
      ckpt.params = std::move(params.front());
      gmrc::SaveCheckpoint(params_out, ckpt);
    }
    *out = handle.release();
  });
}

gmrc_status gmrc_report_to_json(const gmrc_report* report, int include_wall_time, char** out) {
  if (!report || !out) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] { *out = CopyString(gmrc::ReportToJson(report->report, include_wall_time != 0)); });
}

gmrc_status gmrc_report_micro_f1(const gmrc_report* report, double* mean, double* std) {
  if (!report) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null report");
  if (mean) *mean = report->report.micro_f1.mean;
  if (std) *std = report->report.micro_f1.std;
  return GMRC_OK;
}

void gmrc_report_free(gmrc_report* report) { delete report; }

gmrc_status gmrc_sweep(const gmrc_config* config, const char* axis, const char* const* values,
                       size_t n_values, const char* name, const char* out_dir, int plot) {
  if (!config || !axis || (!values && n_values) || !out_dir) {
    return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const gmrc::SweepAxis a = gmrc::ParseSweepAxis(axis);
    std::vector<std::string> vals;
    for (size_t i = 0; i < n_values; ++i) {
      Require(values[i] != nullptr, "null sweep value");
      vals.emplace_back(values[i]);
    }
    auto reports = gmrc::RunSweep(config->config, a, vals);
    if (name && *name) {
      for (auto& r : reports) r.label = std::string(name) + ":" + r.label;
    }
    gmrc::WriteReports(reports, out_dir);
    if (plot) {
      std::vector<gmrc::ReportRow> rows;
      for (const auto& r : reports) rows.push_back(gmrc::ReportRowFromJson(gmrc::ReportToJson(r), r.label));
      WriteFile((fs::path(out_dir) / "sweep.svg").string(),
                gmrc::PlotRowsSvg(rows, std::string("sweep over ") + axis));
    }
  });
}

gmrc_status gmrc_eval(const char* params_path, const char* data_dir, const char* predictions_out,
                      char** metrics_json) {
  if (!params_path || !data_dir || !metrics_json) {
    return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    gmrc::Checkpoint ckpt = gmrc::LoadCheckpoint(params_path);
    gmrc::TrainConfig cfg = ckpt.config;
    const std::string parser = cfg.data.parser;
    cfg.data = gmrc::DataConfig{};
    cfg.data.dir = data_dir;
    cfg.data.parser = parser;
    const gmrc::RelationSchema schema(ckpt.relations, ckpt.na_label);
    const gmrc::Dataset ds = gmrc::LoadDataset(cfg, schema, ckpt.vocab);
    if (ds.vocab.size() != ckpt.vocab.size()) {
      gmrc::Fail(gmrc::ErrorCode::kVocab, "data needs marker tokens the checkpoint vocab lacks");
    }
    const gmrc::EvalResult r =
        gmrc::Evaluate(ckpt.params, gmrc::EffectiveEncoder(cfg), ds.test.items, schema);
    if (predictions_out) {
      std::string lines;
      for (const auto& p : r.predictions) lines += gmrc::SerializePredictionJson(p, schema) + "\n";
      WriteFile(predictions_out, lines);
    }
    nlohmann::ordered_json m;
    m["micro_f1"] = r.micro_f1;
    m["macro_f1"] = r.macro_f1;
    m["n"] = ds.test.size();
    m["n_rejected"] = ds.test.n_rejected();
    m["mention_micro_f1"] = r.mention_micro_f1 ? nlohmann::ordered_json(*r.mention_micro_f1)
                                               : nlohmann::ordered_json(nullptr);
    m["pronoun_micro_f1"] = r.pronoun_micro_f1 ? nlohmann::ordered_json(*r.pronoun_micro_f1)
                                               : nlohmann::ordered_json(nullptr);
    *metrics_json = CopyString(m.dump(2));
  });
}

gmrc_status gmrc_report_aggregate(const char* runs_dir, const char* out_path, int plot,
                                  char** table) {
  if (!runs_dir || !out_path) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    const auto rows = gmrc::LoadReportRows(runs_dir);
    WriteFile(out_path, gmrc::AggregateReports(rows) + "\n");
    if (plot) {
      fs::path svg(out_path);
      svg.replace_extension(".svg");
      WriteFile(svg.string(), gmrc::PlotRowsSvg(rows, fs::path(runs_dir).filename().string()));
    }
    if (table) *table = CopyString(gmrc::ReportTable(rows));
  });
}

gmrc_status gmrc_significance(const double* a, size_t n_a, const double* b, size_t n_b,
                              size_t resamples, uint64_t seed, int paired, double* estimate) {
  if (!a || !b || !estimate) return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  return Guard([&] {
    *estimate = gmrc::BootstrapSignificance(
        {a, n_a}, {b, n_b}, resamples, seed,
        paired ? gmrc::BootstrapMode::kPaired : gmrc::BootstrapMode::kUnpaired);
  });
}

gmrc_status gmrc_significance_files(const char* report_a, const char* report_b, size_t resamples,
                                    uint64_t seed, int paired, double* estimate) {
  if (!report_a || !report_b || !estimate) {
    return SetError(GMRC_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const auto a = gmrc::SeedScoresFromJson(gmrc::ReadFile(report_a));
    const auto b = gmrc::SeedScoresFromJson(gmrc::ReadFile(report_b));
    *estimate = gmrc::BootstrapSignificance(
        a, b, resamples, seed,
        paired ? gmrc::BootstrapMode::kPaired : gmrc::BootstrapMode::kUnpaired);
  });
}

}  // extern "C"
