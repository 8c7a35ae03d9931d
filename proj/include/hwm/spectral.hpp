#pragma once

#include <string>
#include <vector>

#include "hwm/field.hpp"
#include "hwm/grid.hpp"

namespace hwm {

/// A diagonal Fourier multiplier, realized as a complex gain per wavenumber.
struct MultiplierSpec {
  enum class Kind { fractional_laplacian, hilbert, heat, lp_low, lp_high, derivative };

  Kind kind = Kind::fractional_laplacian;
  double s = 0.0;       // fractional_laplacian exponent, gain |xi|^s
  double eps = 0.0;     // heat viscosity
  double t = 0.0;       // heat time
  double cutoff = 0.0;  // LP frequency N

  static MultiplierSpec fractional_laplacian(double s) { return {Kind::fractional_laplacian, s}; }
  static MultiplierSpec hilbert() { return {Kind::hilbert}; }
  static MultiplierSpec heat(double eps, double t) { return {Kind::heat, 0.0, eps, t}; }
  static MultiplierSpec lp_low(double n) { return {Kind::lp_low, 0.0, 0.0, 0.0, n}; }
  static MultiplierSpec lp_high(double n) { return {Kind::lp_high, 0.0, 0.0, 0.0, n}; }
  static MultiplierSpec derivative() { return {Kind::derivative}; }

  /// Throws ErrorCode::domain if the parameters are inadmissible on the grid.
  void validate(const SpectralGrid& grid) const;

  /// Gain at signed wavenumber xi. Odd multipliers (hilbert, derivative)
  /// vanish on the Nyquist mode so that real fields stay real.
  Complex gain(double xi, bool nyquist) const;

  /// Gains for the half-spectrum layout of the grid (xi >= 0 except Nyquist).
  std::vector<Complex> table(const SpectralGrid& grid) const;

  std::string describe() const;
};

/// Caller-owned scratch for apply_multiplier.
class Workspace {
 public:
  explicit Workspace(const SpectralGrid& grid)
      : coeffs_(grid.spectral_size()), scratch_(grid.spectral_size()) {}
  std::vector<Complex>& coeffs() { return coeffs_; }
  std::vector<Complex>& scratch() { return scratch_; }

 private:
  std::vector<Complex> coeffs_;
  std::vector<Complex> scratch_;
};

/// Componentwise inverse transform of gain * f_hat.
VectorField3 apply_multiplier(const SpectralGrid& grid, const MultiplierSpec& spec,
                              const VectorField3& f, Workspace& ws);
VectorField3 apply_multiplier(const SpectralGrid& grid, const MultiplierSpec& spec,
                              const VectorField3& f);
/// Same, on the field's own grid.
VectorField3 apply_multiplier(const MultiplierSpec& spec, const VectorField3& f);

/// Scalar version used by norms and the solver internals.
void apply_multiplier(const SpectralGrid& grid, const std::vector<Complex>& gains,
                      std::span<const double> in, std::span<double> out, Workspace& ws);

/// Relative L2 mismatch of hilbert(derivative f) against fractional_laplacian(1) f.
double compose_check(const SpectralGrid& grid, const VectorField3& f);

}  // namespace hwm
