#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hwm/field.hpp"
#include "hwm/trajectory.hpp"

namespace hwm {

/// (1 - r^2)^p on |r| < 1 with its first and second derivatives in x, for
/// r = (x - center) / width.
struct PolyBump {
  double center = 0.0;
  double width = 1.0;
  int order = 8;

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  double lower() const { return center - width; }
  double upper() const { return center + width; }
};

/// Tensor-product test field phi(t, x) = chi(t) psi(x) d with polynomial bumps
/// chi, psi and a fixed direction d, so d_t phi and Delta phi are analytic.
struct TestFunction {
  PolyBump space;
  PolyBump time;
  Vec3 direction{1.0, 0.0, 0.0};
  double horizon = 1.0;  // T; chi must vanish at T
  std::string label;

  double chi(double t) const { return time.value(t); }
  double chi_prime(double t) const { return time.derivative(t); }
  VectorField3 psi(const GridPtr& grid) const;
  VectorField3 laplacian_psi(const GridPtr& grid) const;

  /// Support of psi strictly inside the box, chi(T) = 0, and either
  /// supp chi inside (0, T) or chi(0) != 0. Throws ErrorCode::domain.
  void validate(const SpectralGrid& grid) const;
  bool touches_initial_time() const { return time.lower() <= 0.0; }
};

/// 3 spatial bumps x 3 temporal bumps x 3 directions, scaled to the horizon.
std::vector<TestFunction> canonical_battery(double box_length, double horizon);

/// Space-time test field given by callbacks; used for sums of test functions
/// and as the slow reference path.
struct SpaceTimeField {
  std::function<VectorField3(double)> value;
  std::function<VectorField3(double)> time_derivative;
  std::function<VectorField3(double)> laplacian;
  std::vector<double> breakpoints;  // times where the profile is not smooth
};

SpaceTimeField as_space_time(const TestFunction& phi, const GridPtr& grid);

/// The four pieces of the weak identities, integrated over [0, T]. Per-slice
/// pairings are interpolated linearly in time and integrated exactly against
/// the time profile, so a constant trajectory balances to rounding.
///   time_term      = - int int u . phi_t
///   initial_term   = - int u0 . phi(0)
///   viscous_term   =   int int u . Delta phi        (without eps)
///   nonlinear_term =   int int (-Delta)^{1/4}(phi x u) . (-Delta)^{1/4} u
struct WeakTerms {
  double time_term = 0.0;
  double initial_term = 0.0;
  double viscous_term = 0.0;
  double nonlinear_term = 0.0;

  double lhs() const { return time_term + initial_term; }
  double regularized_signed(double eps) const { return lhs() - eps * viscous_term - nonlinear_term; }
  double halfwave_signed() const { return lhs() - nonlinear_term; }
};

WeakTerms weak_terms(const Trajectory& traj, const SpaceTimeField& phi);
WeakTerms weak_terms(const Trajectory& traj, const TestFunction& phi);

/// |LHS - RHS| of the regularized weak identity.
double weak_residual_regularized(const Trajectory& traj, const TestFunction& phi);
/// |LHS - RHS| of the half-wave weak identity (no viscous term).
double weak_residual_halfwave(const Trajectory& traj, const TestFunction& phi);

struct BatteryResult {
  std::vector<std::string> labels;
  std::vector<WeakTerms> terms;
  std::vector<double> regularized;  // absolute residuals
  std::vector<double> halfwave;
};

/// All test functions at once, sharing per-slice spectral work.
BatteryResult evaluate_battery(const Trajectory& traj, const std::vector<TestFunction>& battery);

/// | int (phi x u) . (-Delta)^{1/2} u - int (-Delta)^{1/4}(phi x u) . (-Delta)^{1/4} u |
double pairing_identity_check(const VectorField3& u, const VectorField3& phi_slice);
/// Scale used for the relative pairing contract: 1 + ||phi x u|| ||(-Delta)^{1/2} u||.
double pairing_scale(const VectorField3& u, const VectorField3& phi_slice);

}  // namespace hwm
