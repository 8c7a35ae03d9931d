#pragma once

#include <functional>
#include <vector>

#include "hwm/field.hpp"
#include "hwm/spectral.hpp"
#include "hwm/trajectory.hpp"

namespace hwm {

/// N(u) = u x (-Delta)^{1/2} u.
VectorField3 nonlinearity(const VectorField3& u, bool dealias = false);

/// Exponential time stepper for u_t - eps u_xx = N(u). The heat part is
/// propagated exactly with gains exp(-eps xi^2 dt); only the nonlinearity is
/// approximated. Owns its scratch state, so one instance per thread.
class Stepper {
 public:
  explicit Stepper(const SolverConfig& cfg);

  const SolverConfig& config() const noexcept { return cfg_; }
  const GridPtr& grid() const noexcept { return grid_; }

  /// One step of size cfg.dt starting at time t (t only labels diagnostics).
  /// Throws ErrorCode::blow_up if the result is not finite.
  VectorField3 step(const VectorField3& u, double t = 0.0);

  /// Spectral N(u) for u given by its coefficients.
  SpectralField spectral_nonlinearity(const SpectralField& u_hat);

 private:
  SpectralField step_etd_rk2(const SpectralField& u_hat);
  SpectralField step_ifrk4(const SpectralField& u_hat);

  SolverConfig cfg_;
  GridPtr grid_;
  std::vector<double> lap_half_;  // |xi|
  std::vector<double> decay_;     // exp(-eps xi^2 dt)
  std::vector<double> decay_half_;  // exp(-eps xi^2 dt / 2)
  std::vector<double> phi1_;      // dt * phi_1(-eps xi^2 dt)
  std::vector<double> phi2_;      // dt * phi_2(-eps xi^2 dt)
  std::vector<Complex> scratch_;
};

/// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2, stable near 0.
double etd_phi1(double z);
double etd_phi2(double z);

/// Single step with a throwaway stepper.
VectorField3 step(const VectorField3& u, const SolverConfig& cfg);

/// Integrate from u0 to cfg.final_time, keeping every output_stride-th slice.
/// The optional observer sees every stored slice as it is produced.
Trajectory evolve(const VectorField3& u0, const SolverConfig& cfg,
                  const std::function<void(double, const VectorField3&)>& observer = {});

struct PicardReport {
  int iterates_kept = 0;
  std::vector<double> xT_differences;     // ||u^(j) - u^(j-1)||_{X_T}, j >= 1
  std::vector<double> contraction_ratios;  // d_j / d_{j-1} above round-off
  bool converged = false;
  /// Geometric mean of the leading (up to four) contraction ratios.
  double geometric_ratio = 0.0;
};

struct PicardResult {
  VectorField3 fixed_point;  // u(T_loc)
  PicardReport report;
  std::vector<double> node_times;
};

/// Fixed-point iteration of the Duhamel map on [0, T_loc], starting from the
/// heat flow of the data. The time integral is a trapezoid sum over
/// duhamel_substeps intervals. Throws ErrorCode::non_contraction when the
/// differences stop shrinking.
PicardResult picard_local_solve(const VectorField3& u0, const SolverConfig& cfg);

/// X_T distance: sup_t ||a - b||_inf + sup_t ||a - b||_{H^1}.
double xT_distance(const std::vector<VectorField3>& a, const std::vector<VectorField3>& b);

}  // namespace hwm
