// Copyright 2026 The avsync Authors.
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

#include "avsync/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "avsync/errors.hpp"

namespace avsync {
namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError(path.string() + ": cannot open for writing");
  os << text;
  if (!os) throw InputError(path.string() + ": write failed");
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

nlohmann::json fold_block(const std::vector<double>& values, const MeanStd& ms) {
  return {{"mean", ms.mean}, {"std", ms.std}, {"values", values}};
}

}  // namespace

void write_epoch_csv(const std::filesystem::path& path, std::span<const EpochStats> epochs) {
  std::ostringstream os;
  os << "epoch,loss,selection_rate,val_eer\n";
  for (const auto& e : epochs) {
    os << e.epoch << ',' << fmt(e.loss) << ',' << fmt(e.selection_rate) << ',';
    if (e.val_eer >= 0) os << fmt(e.val_eer);
    os << '\n';
  }
  write_text(path, os.str());
}

void write_roc_csv(const std::filesystem::path& path, std::span<const RocPoint> roc) {
  std::ostringstream os;
  os << "threshold,far,tpr\n";
  for (const auto& p : roc) os << fmt(p.threshold) << ',' << fmt(p.far) << ',' << fmt(p.tpr) << '\n';
  write_text(path, os.str());
}

void write_pr_csv(const std::filesystem::path& path, std::span<const PrPoint> pr) {
  std::ostringstream os;
  os << "threshold,recall,precision\n";
  for (const auto& p : pr) os << fmt(p.threshold) << ',' << fmt(p.recall) << ',' << fmt(p.precision) << '\n';
  write_text(path, os.str());
}

std::string render_svg(const CurvePlot& plot) {
  if (plot.x.size() != plot.y.size()) throw ContractError("plot x and y differ in length");
  constexpr double kSize = 400, kMargin = 50;
  auto px = [&](double v) { return kMargin + v * kSize; };
  auto py = [&](double v) { return kMargin + (1 - v) * kSize; };
  char buf[128];
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"500\" height=\"500\" fill=\"white\"/>\n";
  os << "<rect x=\"50\" y=\"50\" width=\"400\" height=\"400\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"468\" font-size=\"11\" text-anchor=\"middle\">%.2f</text>\n", px(v), v);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"44\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%.2f</text>\n", py(v) + 4, v);
    os << buf;
  }
  os << "<text x=\"250\" y=\"30\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(plot.title) << "</text>\n";
  os << "<text x=\"250\" y=\"492\" font-size=\"12\" text-anchor=\"middle\">" << xml_escape(plot.x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"250\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 250)\">"
     << xml_escape(plot.y_label) << "</text>\n";
  if (plot.diagonal) os << "<line x1=\"50\" y1=\"450\" x2=\"450\" y2=\"50\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(plot.x[i]), py(plot.y[i]));
    os << buf;
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

void write_svg(const std::filesystem::path& path, const CurvePlot& plot) { write_text(path, render_svg(plot)); }

std::string metrics_json(const RunReport& report, const std::vector<std::pair<std::string, double>>& extra) {
  nlohmann::ordered_json j;
  j["eer"] = report.overall.eer;
  j["auc"] = report.overall.auc;
  j["ap"] = report.overall.ap;
  j["n_gen"] = report.overall.n_gen;
  j["n_imp"] = report.overall.n_imp;
  j["folds"] = {{"eer", fold_block(report.eer, report.eer_stats)},
                {"auc", fold_block(report.auc, report.auc_stats)},
                {"ap", fold_block(report.ap, report.ap_stats)}};
  for (const auto& [k, v] : extra) j[k] = v;
  return j.dump(2) + "\n";
}

}  // namespace avsync
