#pragma once

#include <string>
#include <vector>

#include "hwm/diagnostics.hpp"
#include "hwm/initial_data.hpp"
#include "hwm/trajectory.hpp"
#include "hwm/weak_form.hpp"

namespace hwm {

/// Space-time window [0, time_fraction T] x {|x - center| <= half_width}.
struct SweepWindow {
  double time_fraction = 1.0;
  double half_width = 8.0;
};

struct SweepPlan {
  std::vector<double> eps_ladder;  // strictly decreasing
  SolverConfig base;               // eps is overwritten per rung
  InitialDataSpec data;
  std::vector<SweepWindow> windows{{0.5, 2.0}, {1.0, 4.0}, {1.0, 8.0}};
  int workers = 1;
  int min_decreasing = 24;
  /// Optional per-rung override of base.project_to_sphere (negative controls).
  std::vector<bool> project_override;

  /// eps_0 2^{-j}, j = 0..rungs-1.
  static std::vector<double> geometric_ladder(double eps0, int rungs);

  /// N_j = round(1 / eps_j).
  std::vector<double> pairing() const;
  bool projected(std::size_t rung) const;
  SolverConfig rung_config(std::size_t rung) const;

  /// Ladder strictly decreasing with >= 4 rungs, windows nested and inside
  /// the box, pairing below Nyquist, base config and data valid.
  void validate() const;
};

struct RungSummary {
  double eps = 0.0;
  double pairing = 0.0;  // N_j
  bool projected = false;
  MaxPrincipleReport max_principle;
  double sphere_certificate = 0.0;  // max_{t,x} ||u|^2 - 1|
  MonotonicityReport critical_monotonicity;
  double h_half_initial = 0.0;
  double h_half_sup = 0.0;
  double h1_growth_rate = 0.0;
  TimeRegularity time_regularity;  // at N_j
  double tail_l2tx = 0.0;          // ||P_{>=N_j} u||_{L2_{t,x}}
  double tail_bound = 0.0;         // sqrt(T) N_j^{-1/2} sup_t ||u||_{H^{1/2}}
  BatteryResult battery;
  double seconds = 0.0;
};

struct SweepReport {
  SweepPlan plan;
  std::vector<RungSummary> rungs;
  std::vector<double> times;
  /// cauchy[n][j] = ||u_j - u_{j+1}||_{L2_{t,x}} on window n.
  std::vector<std::vector<double>> cauchy;
  /// Full-box split with the pairing N_j of the finer rung of each pair.
  std::vector<double> cauchy_low;
  std::vector<double> cauchy_high;
  bool aborted = false;
  std::string abort_reason;
};

/// Runs every rung on a bounded thread pool. A blow-up in any rung stops the
/// sweep and returns the rungs that finished with aborted set.
SweepReport run_viscosity_sweep(const SweepPlan& plan);

struct CauchyTrend {
  /// Slope of log(difference) against log(1/eps) per window; negative means
  /// the differences shrink as eps decreases. NaN when trivially convergent.
  std::vector<double> slopes;
  std::vector<bool> strictly_decreasing;
  bool trivially_convergent = false;  // every difference is zero
};

/// Throws ErrorCode::invalid_argument with fewer than three adjacent pairs.
CauchyTrend cauchy_differences(const SweepReport& report);

struct LimitVerdict {
  bool passed = false;
  bool trend_ok = false;
  bool weak_ok = false;
  bool sphere_ok = false;
  int decreasing_count = 0;  // battery entries whose halfwave residual decreases
  int battery_size = 0;
  /// Least-squares fit certificate ~ intercept + slope * eps.
  double envelope_intercept = 0.0;
  double envelope_slope = 0.0;
  bool envelope_ok = false;  // 0 <= intercept <= 1e-6 within round-off
  std::vector<std::string> reasons;
};

inline constexpr double kEnvelopeInterceptTolerance = 1e-6;

LimitVerdict certify_limit(const SweepReport& report);

}  // namespace hwm
