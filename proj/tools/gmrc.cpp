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

// gmrc command-line tool. Everything goes through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmrc/gmrc.h"

namespace {

struct Failure {
  gmrc_status status;
};

void Check(gmrc_status status) {
  if (status != GMRC_OK) throw Failure{status};
}

// Owns a library-allocated string.
class OwnedString {
 public:
  OwnedString() = default;
  ~OwnedString() { gmrc_string_free(ptr_); }
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  char** out() { return &ptr_; }
  std::string str() const { return ptr_ ? ptr_ : ""; }

 private:
  char* ptr_ = nullptr;
};

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(2);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(2);
  }
  out << text;
}

bool OnOff(const std::string& v) { return v == "on"; }

struct ConfigHandle {
  gmrc_config* ptr = nullptr;
  ~ConfigHandle() { gmrc_config_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmrc: relation classification over graph meaning representations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gmrc_version()));

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse and validate GMR files");
  std::string ingest_format = "conllu", ingest_input, ingest_out;
  bool ingest_validate = false;
  ingest->add_option("--format", ingest_format, "conllu|jsonl")
      ->check(CLI::IsMember({"conllu", "jsonl"}));
  ingest->add_option("--input", ingest_input, "input file")->required();
  ingest->add_flag("--validate", ingest_validate, "write a validation summary");
  ingest->add_option("--out", ingest_out, "canonical JSONL output (default stdout)");

  // tokenize
  auto* tokenize = app.add_subcommand("tokenize", "mark entities and split into subwords");
  std::string tok_vocab, tok_scheme = "entity", tok_input, tok_out;
  std::size_t tok_max_length = 256;
  tokenize->add_option("--vocab", tok_vocab)->required();
  tokenize->add_option("--scheme", tok_scheme, "entity|typed")
      ->check(CLI::IsMember({"entity", "typed"}));
  tokenize->add_option("--input", tok_input, "instances JSONL")->required();
  tokenize->add_option("--out", tok_out);
  tokenize->add_option("--max-length", tok_max_length);

  // build-graph
  auto* build = app.add_subcommand("build-graph", "lift GMRs onto subword sequences");
  std::string bg_gmr, bg_instances, bg_vocab, bg_scheme = "entity", bg_loops = "on", bg_out;
  std::string bg_prune = "off";
  long long bg_random_seed = -1;
  build->add_option("--gmr", bg_gmr)->required();
  build->add_option("--instances", bg_instances)->required();
  build->add_option("--vocab", bg_vocab)->required();
  build->add_option("--scheme", bg_scheme)->check(CLI::IsMember({"entity", "typed"}));
  build->add_option("--self-loops", bg_loops)->check(CLI::IsMember({"on", "off"}));
  build->add_option("--prune-punct", bg_prune)->check(CLI::IsMember({"on", "off"}));
  build->add_option("--random-seed", bg_random_seed,
                    "replace dependency edges with random ones drawn from this seed");
  build->add_option("--out", bg_out);

  // train
  auto* train = app.add_subcommand("train", "train all seeds of a config");
  std::string train_config, train_out, train_params;
  bool train_no_wall = false;
  train->add_option("--config", train_config)->required();
  train->add_option("--out", train_out, "report JSON (default stdout)");
  train->add_option("--params-out", train_params, "checkpoint of the first seed");
  train->add_flag("--no-wall-time", train_no_wall, "omit wall time from the report");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "one multi-seed run per axis value");
  std::string sweep_config, sweep_axis, sweep_out, sweep_name;
  std::vector<std::string> sweep_values;
  bool sweep_plot = false;
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--axis", sweep_axis)->required()->check(
      CLI::IsMember({"layers", "graph", "parser"}));
  sweep->add_option("--values", sweep_values)->required()->delimiter(',');
  sweep->add_option("--out", sweep_out, "output directory")->required();
  sweep->add_option("--name", sweep_name, "series name prefixed to report labels");
  sweep->add_flag("--plot", sweep_plot);

  // synth
  auto* synth = app.add_subcommand("synth", "generate the synthetic clue-word benchmark");
  std::string synth_spec, synth_out;
  std::uint64_t synth_seed = 0;
  synth->add_option("--spec", synth_spec, "spec JSON (defaults when omitted)");
  synth->add_option("--seed", synth_seed)->required();
  synth->add_option("--out", synth_out)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a test split");
  std::string eval_params, eval_data, eval_out, eval_predictions;
  eval->add_option("--params", eval_params)->required();
  eval->add_option("--data", eval_data)->required();
  eval->add_option("--out", eval_out, "metrics JSON (default stdout)");
  eval->add_option("--predictions", eval_predictions, "predictions JSONL");

  // report
  auto* report = app.add_subcommand("report", "aggregate run reports");
  std::string report_runs, report_out;
  bool report_plot = false;
  report->add_option("--runs", report_runs)->required();
  report->add_option("--out", report_out)->required();
  report->add_flag("--plot", report_plot);

  // significance
  auto* sig = app.add_subcommand("significance", "bootstrap comparison of two reports");
  std::string sig_a, sig_b;
  std::size_t sig_resamples = 10000;
  std::uint64_t sig_seed = 0;
  bool sig_unpaired = false;
  sig->add_option("--a", sig_a)->required();
  sig->add_option("--b", sig_b)->required();
  sig->add_option("--resamples", sig_resamples);
  sig->add_option("--seed", sig_seed);
  sig->add_flag("--unpaired", sig_unpaired);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      gmrc_graphs* graphs = nullptr;
      Check(gmrc_graphs_read(ingest_input.c_str(), ingest_format.c_str(), &graphs));
      OwnedString jsonl;
      const gmrc_status st = gmrc_graphs_to_jsonl(graphs, jsonl.out());
      std::size_t violations = 0, flagged = 0;
      OwnedString summary;
      if (st == GMRC_OK && ingest_validate) {
        for (std::size_t i = 0; i < gmrc_graphs_count(graphs); ++i) {
          gmrc_validation v;
          Check(gmrc_graphs_validate(graphs, i, &v));
          violations += v.n_violations;
          flagged += v.n_violations > 0;
        }
        Check(gmrc_graphs_validation_json(graphs, summary.out()));
      }
      const std::size_t count = gmrc_graphs_count(graphs);
      gmrc_graphs_free(graphs);
      Check(st);
      Emit(ingest_out, jsonl.str());
      if (ingest_validate) {
        if (!ingest_out.empty() && ingest_out != "-") {
          Emit(ingest_out + ".validation.json", summary.str() + "\n");
        }
        std::cerr << count << " graphs, " << flagged << " with violations (" << violations
                  << " total)\n";
      } else {
        std::cerr << count << " graphs\n";
      }
    } else if (*tokenize) {
      OwnedString out;
      std::size_t rejected = 0;
      Check(gmrc_tokenize_file(tok_vocab.c_str(), tok_scheme.c_str(), tok_input.c_str(),
                               tok_max_length, out.out(), &rejected));
      Emit(tok_out, out.str());
      std::cerr << "rejected " << rejected << " instances\n";
    } else if (*build) {
      OwnedString out;
      Check(gmrc_build_graph_file(bg_gmr.c_str(), bg_instances.c_str(), bg_vocab.c_str(),
                                  bg_scheme.c_str(), OnOff(bg_loops), OnOff(bg_prune),
                                  bg_random_seed, out.out()));
      Emit(bg_out, out.str());
    } else if (*train) {
      ConfigHandle cfg;
      Check(gmrc_config_load(train_config.c_str(), &cfg.ptr));
      gmrc_report* rep = nullptr;
      Check(gmrc_train(cfg.ptr, train_params.empty() ? nullptr : train_params.c_str(), &rep));
      OwnedString json;
      const gmrc_status st = gmrc_report_to_json(rep, !train_no_wall, json.out());
      double mean = 0, std = 0;
      gmrc_report_micro_f1(rep, &mean, &std);
      gmrc_report_free(rep);
      Check(st);
      Emit(train_out, json.str() + "\n");
      std::fprintf(stderr, "test micro-F1 %.2f +- %.2f\n", 100 * mean, 100 * std);
    } else if (*sweep) {
      ConfigHandle cfg;
      Check(gmrc_config_load(sweep_config.c_str(), &cfg.ptr));
      std::vector<const char*> values;
      for (const auto& v : sweep_values) values.push_back(v.c_str());
      Check(gmrc_sweep(cfg.ptr, sweep_axis.c_str(), values.data(), values.size(),
                       sweep_name.empty() ? nullptr : sweep_name.c_str(), sweep_out.c_str(),
                       sweep_plot));
      std::cerr << "wrote " << values.size() << " reports to " << sweep_out << "\n";
    } else if (*synth) {
      const std::string spec = synth_spec.empty() ? "" : ReadAll(synth_spec);
      Check(gmrc_synth(synth_spec.empty() ? nullptr : spec.c_str(), synth_seed,
                       synth_out.c_str()));
    } else if (*eval) {
      OwnedString metrics;
      Check(gmrc_eval(eval_params.c_str(), eval_data.c_str(),
                      eval_predictions.empty() ? nullptr : eval_predictions.c_str(),
                      metrics.out()));
      Emit(eval_out, metrics.str() + "\n");
    } else if (*report) {
      OwnedString table;
      Check(gmrc_report_aggregate(report_runs.c_str(), report_out.c_str(), report_plot,
                                  table.out()));
      std::cout << table.str();
    } else if (*sig) {
      double estimate = 0;
      Check(gmrc_significance_files(sig_a.c_str(), sig_b.c_str(), sig_resamples, sig_seed,
                                    !sig_unpaired, &estimate));
      std::printf("P(mean_a <= mean_b) = %.4f\n", estimate);
    }
  } catch (const Failure& f) {
    std::cerr << "error (" << gmrc_status_string(f.status) << "): " << gmrc_last_error() << "\n";
    return 1;
  }
  return 0;
}
