#pragma once

#include <vector>

#include "hwm/field.hpp"
#include "hwm/trajectory.hpp"

namespace hwm {

/// Per-slice diagnostics of one run; every series is indexed like times.
struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> e_h1;        // 1/2 ||u_x||^2
  std::vector<double> e_c;         // 1/2 ||(-Delta)^{1/4} u||^2
  std::vector<double> sphere_dev;  // max_x | |u|^2 - 1 |
  std::vector<double> far_field;   // max |u - Q| outside the padded support
  std::vector<double> tail_cutoffs;
  std::vector<std::vector<double>> tail;  // tail[i][j]: ||P_{>=N_i} u(t_j)||
};

struct SeriesOptions {
  Vec3 far_field{0.0, 0.0, 1.0};
  double center = 0.0;
  double far_radius = 2.0;
  std::vector<double> tail_cutoffs{8.0, 16.0, 32.0, 64.0};
};

DiagnosticsSeries compute_series(const Trajectory& traj, const SeriesOptions& opts);

// -- energies ---------------------------------------------------------------

/// E_c(t) per slice.
std::vector<double> critical_energy(const Trajectory& traj);
/// 1/2 ||u_x||^2 per slice.
std::vector<double> h1_energy(const Trajectory& traj);

/// Per-step monotonicity tolerance 1e-8 (1 + E_c(0)).
double monotonicity_tolerance(double ec0);

struct MonotonicityReport {
  double max_increase = 0.0;  // max_j E(j+1) - E(j); negative when strictly decreasing
  double tolerance = 0.0;
  bool strictly_decreasing = false;
  bool passed = false;
};

MonotonicityReport check_nonincreasing(const std::vector<double>& series, double tolerance);

/// |dE_c/dt (centered) + eps ||(-Delta)^{3/4} u||^2| / (1 + eps ||.||^2) at interior slices.
std::vector<double> critical_energy_identity_residual(const Trajectory& traj);

/// |dE/dt (centered) - RHS| / (1 + |RHS|) at interior slices, where
/// RHS = -eps ||u_xx||^2 - int N(u) . u_xx and E = 1/2 ||u_x||^2.
/// Needs at least three slices.
std::vector<double> energy_identity_residual(const Trajectory& traj);

/// Least-squares rate r of E(t) ~ E(0) e^{r t}; records the growth the a priori
/// estimate allows without asserting its constants.
double fitted_growth_rate(const std::vector<double>& times, const std::vector<double>& energy);

// -- maximum principle and the |u|^2 equation ------------------------------

/// tol_mp = 1e-6 + kMaxPrincipleDtConstant * dt^2.
inline constexpr double kMaxPrincipleDtConstant = 1.0;
double max_principle_tolerance(double dt);

struct MaxPrincipleReport {
  double max_v = 0.0;  // max_{t,x} |u|^2
  double t_at_max = 0.0;
  double x_at_max = 0.0;
  double min_v = 0.0;  // min_{t,x} |u|^2
  double tolerance = 0.0;
  bool passed = false;
};

MaxPrincipleReport max_principle_report(const Trajectory& traj);

/// Normalized residual of v_t - eps v_xx + 2 eps |u_x|^2 with v = |u|^2, at
/// interior slices: max_x |r| / (1 + max_x 2 eps |u_x|^2). With
/// include_source = false the source term is dropped (ablation).
std::vector<double> constraint_equation_residual(const Trajectory& traj,
                                                 bool include_source = true);

/// max_x 2 eps |u_x|^2 at interior slices, the size of the dropped term.
std::vector<double> constraint_source_magnitude(const Trajectory& traj);

// -- far field, tails, commutator ------------------------------------------

/// Per slice, max |u - Q| over points whose periodic distance to center
/// exceeds radius. Throws ErrorCode::domain if radius is not in (0, L/2).
std::vector<double> far_field_report(const Trajectory& traj, Vec3 far_field, double radius,
                                     double center = 0.0);
double far_field_distance(const VectorField3& u, Vec3 far_field, double radius,
                                       double center = 0.0);

struct TailReport {
  std::vector<double> cutoffs;
  std::vector<std::vector<double>> tail;   // ||P_{>=N} u(t)||
  std::vector<std::vector<double>> bound;  // N^{-1/2} ||u(t)||_{H^{1/2}}
  int violations = 0;
  double min_slack = 0.0;  // min over (N, t) of bound - tail
};

TailReport tail_norm(const Trajectory& traj, const std::vector<double>& cutoffs);
/// ||P_{>=N} u||_{L2} for one slice.
double tail_norm(const VectorField3& u, double cutoff);

/// || (-Delta)^{1/4}(u x phi) - ((-Delta)^{1/4} u) x phi ||_{L2}
double commutator_norm(const VectorField3& u, const VectorField3& phi);

/// Slope of log y against log x by least squares.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Three-point Richardson order log2((r1 - r2) / (r2 - r3)) for values at
/// h, h/2, h/4.
double richardson_order(double r1, double r2, double r3);

struct TimeRegularity {
  double projected = 0.0;  // ||P_{<N} d_t u||_{L2_{t,x}}
  double full = 0.0;       // ||d_t u||_{L2_{t,x}}
};

/// Time-difference proxy for the low-frequency time regularity of a run.
TimeRegularity time_regularity(const Trajectory& traj, double cutoff);

}  // namespace hwm
