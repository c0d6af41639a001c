// Copyright 2026 The Ocrplex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV, JSON and SVG renderings of sweep and evaluation reports.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ocrplex/complexity.h"
#include "ocrplex/metrics.h"

namespace ocrplex {
namespace {

std::string Number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string XmlEscape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Smallest "nice" axis maximum (1, 2 or 5 times a power of ten) >= value.
double NiceCeiling(double value) {
  if (!(value > 0.0)) return 0.1;
  const double magnitude = std::pow(10.0, std::floor(std::log10(value)));
  for (double step : {1.0, 2.0, 5.0, 10.0}) {
    if (step * magnitude >= value) return step * magnitude;
  }
  return 10.0 * magnitude;
}

}  // namespace

std::string SweepReportCsv(const SweepReport& report) {
  std::ostringstream out;
  out << "corpus,model,subset,gamma,theta,std_error,n_samples,seed\n";
  for (const ComplexityEstimate& row : report.rows) {
    out << CsvField(report.corpus) << ',' << CsvField(report.model) << ','
        << SubsetName(row.subset) << ',' << Number(row.gamma) << ','
        << Number(row.theta) << ',' << Number(row.std_error) << ','
        << row.n_samples << ',' << row.seed << '\n';
  }
  return out.str();
}

std::string SweepReportJson(const SweepReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ComplexityEstimate& row : report.rows) {
    rows.push_back({{"subset", SubsetName(row.subset)},
                    {"gamma", row.gamma},
                    {"theta", row.theta},
                    {"std_error", row.std_error},
                    {"n_samples", row.n_samples},
                    {"errors", row.errors},
                    {"seed", row.seed}});
  }
  nlohmann::ordered_json out;
  out["corpus"] = report.corpus;
  out["model"] = report.model;
  out["seed"] = report.seed;
  out["rows"] = std::move(rows);
  return out.dump(2);
}

std::string SweepReportSvg(const SweepReport& report) {
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 80, kRight = 130, kTop = 40, kBottom = 60;
  constexpr double kPlotWidth = kWidth - kLeft - kRight;
  constexpr double kPlotHeight = kHeight - kTop - kBottom;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::map<Subset, std::vector<const ComplexityEstimate*>> series;
  double theta_max = 0.0;
  for (const ComplexityEstimate& row : report.rows) {
    series[row.subset].push_back(&row);
    theta_max = std::max(theta_max, row.theta);
  }
  const double y_max = NiceCeiling(theta_max);
  auto x_of = [&](double gamma) { return kLeft + gamma * kPlotWidth; };
  auto y_of = [&](double theta) {
    return kTop + kPlotHeight * (1.0 - theta / y_max);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
         "height=\"500\" viewBox=\"0 0 800 500\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n";
  svg << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">"
      << XmlEscape(report.corpus) << " / " << XmlEscape(report.model)
      << "</text>\n";
  // Axes.
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + kPlotHeight
      << "\" x2=\"" << kLeft + kPlotWidth << "\" y2=\"" << kTop + kPlotHeight
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + kPlotHeight << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double gamma = k / 5.0;
    const double theta = y_max * k / 5.0;
    svg << "<line x1=\"" << x_of(gamma) << "\" y1=\"" << kTop + kPlotHeight
        << "\" x2=\"" << x_of(gamma) << "\" y2=\"" << kTop + kPlotHeight + 5
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x_of(gamma) << "\" y=\"" << kTop + kPlotHeight + 20
        << "\" text-anchor=\"middle\">" << Number(gamma) << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y_of(theta)
        << "\" x2=\"" << kLeft << "\" y2=\"" << y_of(theta)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y_of(theta) + 4
        << "\" text-anchor=\"end\">" << Number(theta) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + kPlotWidth / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-size=\"16\">γ</text>\n";
  svg << "<text x=\"20\" y=\"" << kTop + kPlotHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"16\">θ</text>\n";

  std::size_t color = 0;
  for (const auto& [subset, rows] : series) {
    const char* stroke = kColors[color++ % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << Number(x_of(rows[i]->gamma)) << ',' << Number(y_of(rows[i]->theta));
    }
    svg << "\"/>\n";
    const double legend_y = kTop + 20.0 * static_cast<double>(color);
    svg << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << legend_y
        << "\" x2=\"" << kWidth - kRight + 40 << "\" y2=\"" << legend_y
        << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kWidth - kRight + 45 << "\" y=\"" << legend_y + 4
        << "\">" << SubsetName(subset) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string EvalReportCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "corpus,system,wer,ref_tokens,edit_ops\n";
  for (const EvalRow& row : report.rows) {
    out << CsvField(report.corpus) << ',' << CsvField(row.system) << ','
        << Number(row.wer) << ',' << row.ref_tokens << ',' << row.edit_ops
        << '\n';
  }
  return out.str();
}

std::string EvalReportJson(const EvalReport& report, bool include_macro) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const EvalRow& row : report.rows) {
    nlohmann::ordered_json entry = {{"system", row.system},
                                    {"wer", row.wer},
                                    {"ref_tokens", row.ref_tokens},
                                    {"edit_ops", row.edit_ops}};
    if (include_macro) entry["macro_wer"] = row.macro_wer;
    rows.push_back(std::move(entry));
  }
  nlohmann::ordered_json out;
  out["corpus"] = report.corpus;
  out["rows"] = std::move(rows);
  return out.dump(2);
}

}  // namespace ocrplex
