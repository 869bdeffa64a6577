// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <string>

namespace dualpress {

/// Parsed command-line configuration. Exit codes of the cmd_* entry points:
/// 0 success / assertions pass, 1 assertion failure, 2 usage error,
/// 3 solver failure.
struct RunConfig {
  std::string subcommand;
  int levels = 4;
  double nu = -1.0;    // negative: use the benchmark default
  double E = -1.0;
  double load = -1.0;
  double tol = 1e-10;
  std::string mode = "mixed";      // mixed | standard | both
  std::string tip = "corner";      // corner | midedge
  std::string bc = "dirichlet";    // dirichlet | paper
  std::string out;                 // CSV path ("" = stdout)
  std::string plot;                // SVG path ("" = none)
  std::string vtk;                 // VTK path ("" = none)
  int dim = 2;
  int threads = 1;                 // DUALPRESS_THREADS caps level parallelism
};

int cmd_beam(const RunConfig& config);
int cmd_cook(const RunConfig& config);
int cmd_infsup(const RunConfig& config);
int cmd_patch(const RunConfig& config);

/// Reads DUALPRESS_THREADS (>= 1) from the environment.
int env_thread_cap();

}  // namespace dualpress
