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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "avsync/metrics.hpp"
#include "avsync/trainer.hpp"

namespace avsync {

/// epoch,loss,selection_rate,val_eer (val_eer empty when not measured).
void write_epoch_csv(const std::filesystem::path& path, std::span<const EpochStats> epochs);
void write_roc_csv(const std::filesystem::path& path, std::span<const RocPoint> roc);
void write_pr_csv(const std::filesystem::path& path, std::span<const PrPoint> pr);

struct CurvePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  /// Draw the y = x chance diagonal.
  bool diagonal = false;
};

/// Unit-square line plot as standalone SVG text; fixed number formatting.
std::string render_svg(const CurvePlot& plot);
void write_svg(const std::filesystem::path& path, const CurvePlot& plot);

/// {"eer", "auc", "ap", "n_gen", "n_imp", "folds": {"eer": {"mean", "std", "values"}, ...}, plus `extra`}.
std::string metrics_json(const RunReport& report, const std::vector<std::pair<std::string, double>>& extra = {});

}  // namespace avsync
