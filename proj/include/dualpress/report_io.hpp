// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <string>
#include <vector>

#include "dualpress/analysis.hpp"

namespace dualpress {

/// 12-significant-digit formatting shared by every CSV/SVG emitter; the
/// determinism contract depends on this being the single formatting path.
std::string format_number(double v);

std::string csv_beam(const ConvergenceReport& primary,
                     const ConvergenceReport* secondary);
std::string csv_cook(const ConvergenceReport& primary,
                     const ConvergenceReport* secondary);
std::string csv_infsup(const InfSupReport& report);

void write_text_file(const std::string& path, const std::string& content);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal polyline plot, optionally log-scaled per axis.
std::string svg_plot(const std::vector<PlotSeries>& series,
                     const std::string& xlabel, const std::string& ylabel,
                     bool logx, bool logy);

}  // namespace dualpress
