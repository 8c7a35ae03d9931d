#pragma once

#include <string>

#include "hwm/field.hpp"

namespace hwm {

enum class DataFamily { geodesic_bump, twist_bump, constant };

std::string to_string(DataFamily family);
DataFamily parse_data_family(const std::string& name);

/// Smooth sphere-valued data equal to far_field outside [center - R, center + R].
struct InitialDataSpec {
  DataFamily family = DataFamily::geodesic_bump;
  Vec3 far_field{0.0, 0.0, 1.0};  // Q
  double amplitude = 3.141592653589793;  // winding angle a (radians)
  double support_radius = 1.0;           // R0
  double center = 0.0;                   // x0
  int bump_order = 8;                    // p
  double twist = 1.5707963267948966;     // twist_bump rotation amplitude (radians)

  /// Throws ErrorCode::domain when |Q| != 1, p < 8, R0 > L/8 or the support
  /// leaves the box.
  void validate(double box_length) const;

  friend bool operator==(const InitialDataSpec&, const InitialDataSpec&) = default;
};

/// Compactly supported polynomial bump (1 - r^2)^p for |r| < 1, zero outside.
double poly_bump(double r, int order);

/// Fixed unit vector orthogonal to q.
Vec3 orthogonal_unit(Vec3 q);

/// Analytic profile u0(x) on the whole line (no periodization).
Vec3 initial_profile(const InitialDataSpec& spec, double x);

VectorField3 make_initial(const GridPtr& grid, const InitialDataSpec& spec);

struct AdmissibilityReport {
  double sphere_deviation = 0.0;
  double far_field_residue = 0.0;  // max |u0 - Q| for |x - x0| >= R0
  double h1_norm = 0.0;
  double h_half_norm = 0.0;
  double spectral_decay_rate = 0.0;  // fitted tail exponent of |u0_hat|; +inf if fully resolved
  bool sphere_ok = false;
  bool far_field_ok = false;
  bool smooth_ok = false;

  bool passed() const { return sphere_ok && far_field_ok && smooth_ok; }
};

/// Minimum fitted decay exponent accepted as effectively smooth.
inline constexpr double kMinSpectralDecay = 4.0;

AdmissibilityReport verify_admissibility(const VectorField3& u0, const InitialDataSpec& spec);

/// Tail exponent of the band maxima of |f_hat| above the round-off floor.
double spectral_decay_rate(const VectorField3& f, Vec3 far_field);

}  // namespace hwm
