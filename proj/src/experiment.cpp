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

#include "gmrc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "gmrc/errors.hpp"
#include "gmrc/rng.hpp"
#include "json.hpp"

namespace gmrc {
namespace {

namespace fs = std::filesystem;

double Mean(std::span<const double> v, const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (std::size_t i : idx) s += v[i];
  return s / static_cast<double>(idx.size());
}

std::string Fmt(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SweepAxis ParseSweepAxis(std::string_view name) {
  if (name == "layers") return SweepAxis::kLayers;
  if (name == "graph") return SweepAxis::kGraphSource;
  if (name == "parser") return SweepAxis::kParserSource;
  Fail(ErrorCode::kConfig, "unknown sweep axis \"" + std::string(name) + "\"; use layers|graph|parser");
}

const char* SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kLayers: return "layers";
    case SweepAxis::kGraphSource: return "graph";
    case SweepAxis::kParserSource: return "parser";
  }
  return "layers";
}

TrainConfig ApplySweepValue(const TrainConfig& base, SweepAxis axis, const std::string& value) {
  TrainConfig cfg = base;
  switch (axis) {
    case SweepAxis::kLayers: {
      std::size_t pos = 0;
      unsigned long layers = 0;
      try {
        layers = std::stoul(value, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != value.size()) {
        Fail(ErrorCode::kConfig, "layer value \"" + value + "\" is not a non-negative integer");
      }
      cfg.encoder.layers = layers;
      break;
    }
    case SweepAxis::kGraphSource:
      cfg.graph_source = ParseGraphSource(value);
      break;
    case SweepAxis::kParserSource:
      cfg.data.parser = value;
      break;
  }
  CheckTrainConfig(cfg);
  return cfg;
}

std::vector<ExperimentReport> RunSweep(const TrainConfig& base, SweepAxis axis,
                                       const std::vector<std::string>& values) {
  if (values.empty()) Fail(ErrorCode::kConfig, "sweep needs at least one value");
  std::vector<TrainConfig> configs;
  for (const std::string& v : values) configs.push_back(ApplySweepValue(base, axis, v));
  std::vector<ExperimentReport> reports;
  std::optional<Dataset> shared;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentReport r;
    if (axis == SweepAxis::kLayers) {
      // Depth does not change the prepared data.
      if (!shared) shared = LoadDataset(configs[i]);
      r = Train(configs[i], *shared);
    } else {
      r = TrainFromConfig(configs[i]);
    }
    r.label = std::string(SweepAxisName(axis)) + "=" + values[i];
    reports.push_back(std::move(r));
  }
  return reports;
}

double BootstrapSignificance(std::span<const double> a, std::span<const double> b,
                             std::size_t resamples, std::uint64_t seed, BootstrapMode mode) {
  if (a.size() < 2 || b.size() < 2) {
    Fail(ErrorCode::kContract, "bootstrap needs at least 2 scores per side");
  }
  if (resamples < 1000) Fail(ErrorCode::kContract, "bootstrap needs at least 1000 resamples");
  if (mode == BootstrapMode::kPaired && a.size() != b.size()) {
    Fail(ErrorCode::kContract, "paired bootstrap needs equal-sized score lists (" +
                                   std::to_string(a.size()) + " vs " +
                                   std::to_string(b.size()) + ")");
  }
  Rng rng(seed);
  std::vector<std::size_t> ia(a.size()), ib(b.size());
  double count = 0.0;
  for (std::size_t r = 0; r < resamples; ++r) {
    for (auto& i : ia) i = rng.Uniform(a.size());
    if (mode == BootstrapMode::kPaired) {
      ib = ia;
    } else {
      for (auto& i : ib) i = rng.Uniform(b.size());
    }
    const double ma = Mean(a, ia);
    const double mb = Mean(b, ib);
    if (ma < mb) count += 1.0;
    else if (ma == mb) count += 0.5;
  }
  return count / static_cast<double>(resamples);
}

ReportRow ReportRowFromJson(std::string_view report_json, const std::string& fallback_label) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(report_json);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("report is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || root.value("format", "") != "gmrc-report") {
    Fail(ErrorCode::kSchema, "\"" + fallback_label + "\" is not a gmrc report");
  }
  ReportRow row;
  try {
    row.label = root.value("label", fallback_label);
    const auto eq = row.label.find('=');
    row.axis_value = eq == std::string::npos ? "" : row.label.substr(eq + 1);
    row.micro_mean = root.at("micro_f1").at("mean").get<double>();
    row.micro_std = root.at("micro_f1").at("std").get<double>();
    row.macro_mean = root.at("macro_f1").at("mean").get<double>();
    row.macro_std = root.at("macro_f1").at("std").get<double>();
    row.mention_mean = root.at("mention_micro_f1").at("mean").get<double>();
    row.pronoun_mean = root.at("pronoun_micro_f1").at("mean").get<double>();
    row.graph_encoder_params = root.at("params").at("graph_encoder_params").get<std::size_t>();
    row.total_params = root.at("params").at("total_params").get<std::size_t>();
    row.seeds = root.at("seeds").size();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, "malformed report \"" + fallback_label + "\": " + e.what());
  }
  return row;
}

std::vector<ReportRow> LoadReportRows(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) Fail(ErrorCode::kIo, dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ReportRow> rows;
  for (const fs::path& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    // Skip non-report JSON (e.g. an earlier aggregate) quietly.
    nlohmann::json probe = nlohmann::json::parse(text, nullptr, false);
    if (probe.is_discarded() || !probe.is_object() || probe.value("format", "") != "gmrc-report") {
      continue;
    }
    rows.push_back(ReportRowFromJson(text, f.stem().string()));
  }
  if (rows.empty()) Fail(ErrorCode::kIo, "no reports found in " + dir);
  return rows;
}

std::string AggregateReports(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json out;
  out["format"] = "gmrc-aggregate";
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const ReportRow& r : rows) {
    nlohmann::ordered_json e;
    e["label"] = r.label;
    e["seeds"] = r.seeds;
    e["micro_f1"] = {{"mean", r.micro_mean}, {"std", r.micro_std}};
    e["macro_f1"] = {{"mean", r.macro_mean}, {"std", r.macro_std}};
    e["mention_micro_f1"] = r.mention_mean;
    e["pronoun_micro_f1"] = r.pronoun_mean;
    e["graph_encoder_params"] = r.graph_encoder_params;
    e["total_params"] = r.total_params;
    list.push_back(std::move(e));
  }
  out["reports"] = std::move(list);
  return out.dump(2);
}

std::string ReportTable(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %6s %15s %15s %9s %9s %10s\n", "label", "seeds",
                "micro F1", "macro F1", "mention", "pronoun", "graph par");
  out << line;
  for (const ReportRow& r : rows) {
    const std::string micro = Fmt(100 * r.micro_mean) + " +- " + Fmt(100 * r.micro_std);
    const std::string macro = Fmt(100 * r.macro_mean) + " +- " + Fmt(100 * r.macro_std);
    std::snprintf(line, sizeof line, "%-24s %6zu %15s %15s %9s %9s %10zu\n", r.label.c_str(),
                  r.seeds, micro.c_str(), macro.c_str(), Fmt(100 * r.mention_mean).c_str(),
                  Fmt(100 * r.pronoun_mean).c_str(), r.graph_encoder_params);
    out << line;
  }
  return out.str();
}

std::string LineChartSvg(const std::vector<PlotSeries>& series, const std::string& title,
                         const std::string& x_label, const std::string& y_label) {
  const double width = 640, height = 400, left = 70, right = 150, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i] - e);
      y1 = std::max(y1, s.y[i] + e);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 1, x1 += 1;
  const double pad = (y1 - y0) * 0.1 + 1e-9;
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << Escape(title) << "</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
    << top + ph << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
    << top + ph << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double yv = y0 + (y1 - y0) * t / 4.0;
    const double xv = x0 + (x1 - x0) * t / 4.0;
    o << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
      << Fmt(yv) << "</text>\n";
    o << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
      << Fmt(xv, 1) << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16
    << "\" text-anchor=\"middle\">" << Escape(x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << top + ph / 2 << ")\">" << Escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* color = kColors[k % 8];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) o << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
    o << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      o << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i]) << "\" r=\"3\" fill=\""
        << color << "\"/>\n";
      if (i < s.err.size() && s.err[i] > 0) {
        o << "<line x1=\"" << sx(s.x[i]) << "\" y1=\"" << sy(s.y[i] - s.err[i]) << "\" x2=\""
          << sx(s.x[i]) << "\" y2=\"" << sy(s.y[i] + s.err[i]) << "\" stroke=\"" << color
          << "\"/>\n";
      }
    }
    const double ly = top + 16.0 * static_cast<double>(k);
    o << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly + 4 << "\">" << Escape(s.name)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string PlotRowsSvg(const std::vector<ReportRow>& rows, const std::string& title) {
  std::vector<PlotSeries> series;
  std::string x_label;
  for (const ReportRow& r : rows) {
    const auto colon = r.label.find(':');
    const std::string name = colon == std::string::npos ? "runs" : r.label.substr(0, colon);
    const std::string tail = colon == std::string::npos ? r.label : r.label.substr(colon + 1);
    if (x_label.empty()) x_label = tail.substr(0, tail.find('='));
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const PlotSeries& s) { return s.name == name; });
    if (it == series.end()) {
      series.push_back({name, {}, {}, {}});
      it = series.end() - 1;
    }
    char* end = nullptr;
    const double v = std::strtod(r.axis_value.c_str(), &end);
    const bool numeric = !r.axis_value.empty() && end && *end == '\0';
    it->x.push_back(numeric ? v : static_cast<double>(it->x.size()));
    it->y.push_back(100.0 * r.micro_mean);
    it->err.push_back(100.0 * r.micro_std);
  }
  return LineChartSvg(series, title, x_label, "test micro-F1");
}

std::vector<std::string> WriteReports(const std::vector<ExperimentReport>& reports,
                                      const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  for (const ExperimentReport& r : reports) {
    std::string name = r.label.empty() ? "report" : r.label;
    std::replace(name.begin(), name.end(), '/', '_');
    const std::string path = (fs::path(dir) / (name + ".json")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
    out << ReportToJson(r) << "\n";
    paths.push_back(path);
  }
  return paths;
}

}  // namespace gmrc
