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

// Sweeps, significance and report aggregation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmrc/config.hpp"
#include "gmrc/train.hpp"

namespace gmrc {

enum class SweepAxis { kLayers, kGraphSource, kParserSource };

SweepAxis ParseSweepAxis(std::string_view name);  // layers|graph|parser
const char* SweepAxisName(SweepAxis axis);

// `base` with one axis value applied.
TrainConfig ApplySweepValue(const TrainConfig& base, SweepAxis axis, const std::string& value);

// One multi-seed run per value, labelled "<axis>=<value>". Datasets are
// loaded once per distinct data setting.
std::vector<ExperimentReport> RunSweep(const TrainConfig& base, SweepAxis axis,
                                       const std::vector<std::string>& values);

enum class BootstrapMode { kPaired, kUnpaired };

// Bootstrap estimate of P(mean_a <= mean_b), counting ties as one half so
// identical inputs give 0.5. Paired mode resamples seed indices jointly and
// requires equal sizes. Needs >= 2 scores per side and >= 1000 resamples.
double BootstrapSignificance(std::span<const double> a, std::span<const double> b,
                             std::size_t resamples = 10000, std::uint64_t seed = 0,
                             BootstrapMode mode = BootstrapMode::kPaired);

// One row per report: label, mean/std of micro and macro F1, group F1,
// parameter counts.
struct ReportRow {
  std::string label;
  std::string axis_value;
  double micro_mean = 0, micro_std = 0, macro_mean = 0, macro_std = 0;
  double mention_mean = 0, pronoun_mean = 0;
  std::size_t graph_encoder_params = 0, total_params = 0;
  std::size_t seeds = 0;
};

ReportRow ReportRowFromJson(std::string_view report_json, const std::string& fallback_label);

// Aggregates every *.json report in `dir` (sorted by file name) into one
// JSON document.
std::string AggregateReports(const std::vector<ReportRow>& rows);
std::vector<ReportRow> LoadReportRows(const std::string& dir);
std::string ReportTable(const std::vector<ReportRow>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y, err;
};

// Minimal SVG line chart with optional error bars.
std::string LineChartSvg(const std::vector<PlotSeries>& series, const std::string& title,
                         const std::string& x_label, const std::string& y_label);

// Micro-F1 (in points) against the axis value. Rows are grouped into series
// by the label prefix before ':'; non-numeric axis values are plotted at
// their position within the series.
std::string PlotRowsSvg(const std::vector<ReportRow>& rows, const std::string& title);

// Writes each report to <dir>/<label>.json (creating dir); returns the paths.
std::vector<std::string> WriteReports(const std::vector<ExperimentReport>& reports,
                                      const std::string& dir);

}  // namespace gmrc
