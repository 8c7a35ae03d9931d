#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hwm/initial_data.hpp"
#include "hwm/sweep.hpp"
#include "hwm/trajectory.hpp"

namespace hwm {

struct DiagnosticsOptions {
  double far_field_radius = 2.0;
  std::vector<double> tail_cutoffs{8.0, 16.0, 32.0, 64.0};
  std::vector<double> commutator_cutoffs{4.0, 8.0, 16.0, 32.0, 64.0};
  double weak_tolerance = 1e-4;  // regularized weak residual, relative

  friend bool operator==(const DiagnosticsOptions&, const DiagnosticsOptions&) = default;
};

struct SweepSettings {
  std::vector<double> eps_ladder{0.1, 0.05, 0.025, 0.0125};
  int workers = 1;
  int min_decreasing = 24;
  // Empty half widths mean L/8, L/4, L/2 at fractions 1/2, 1, 1.
  std::vector<double> window_times;
  std::vector<double> window_half_widths;

  friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

/// Everything one CLI invocation needs, read from a sectioned key = value file.
struct RunConfig {
  SolverConfig solver;
  InitialDataSpec data;
  DiagnosticsOptions diagnostics;
  SweepSettings sweep;
  std::uint64_t seed = 0;
  std::string name = "run";

  /// Checks every section; error messages name the offending key.
  void validate() const;
  SweepPlan sweep_plan() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ErrorCode::io if unreadable and ErrorCode::config for syntax errors,
/// unknown keys, missing required keys and invariant violations.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");

/// Inverse of parse_config_text: every key written, doubles with 17 digits.
std::string serialize_config(const RunConfig& cfg);

}  // namespace hwm
