#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hwm/field.hpp"

namespace hwm {

enum class Integrator { etd_rk2, ifrk4 };

std::string to_string(Integrator integrator);
Integrator parse_integrator(const std::string& name);

struct PicardOptions {
  int max_iters = 30;
  double window = 1e-2;   // T_loc
  int duhamel_substeps = 32;
  double tolerance = 1e-12;

  friend bool operator==(const PicardOptions&, const PicardOptions&) = default;
};

struct SolverConfig {
  double eps = 1e-2;
  double final_time = 1.0;
  double dt = 1e-3;
  double box_length = 16.0;
  std::size_t num_points = 1024;
  int output_stride = 1;
  Integrator integrator = Integrator::etd_rk2;
  PicardOptions picard;
  bool project_to_sphere = false;
  bool dealias = false;

  /// Number of time steps, round(T / dt).
  std::size_t num_steps() const;
  /// Largest dt * max|xi| the integrator is run with.
  static double stability_constant(Integrator integrator);
  /// Throws ErrorCode::domain / ErrorCode::stability on invalid settings.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Time-indexed slices u(t_j, .) of one run. Slices share a grid and are
/// spaced output_stride * dt apart.
struct Trajectory {
  SolverConfig config;
  std::vector<double> times;
  std::vector<VectorField3> slices;

  std::size_t size() const noexcept { return slices.size(); }
  const GridPtr& grid() const { return slices.front().grid_ptr(); }
  double stride_time() const { return config.dt * double(config.output_stride); }
  /// Throws ErrorCode::invalid_argument if slices or times are inconsistent.
  void validate() const;
};

}  // namespace hwm
