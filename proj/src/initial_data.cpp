#include "hwm/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hwm/error.hpp"
#include "hwm/fields.hpp"

namespace hwm {

std::string to_string(DataFamily family) {
  switch (family) {
    case DataFamily::geodesic_bump: return "geodesic_bump";
    case DataFamily::twist_bump: return "twist_bump";
    case DataFamily::constant: return "constant";
  }
  return "?";
}

DataFamily parse_data_family(const std::string& name) {
  if (name == "geodesic_bump") return DataFamily::geodesic_bump;
  if (name == "twist_bump") return DataFamily::twist_bump;
  if (name == "constant") return DataFamily::constant;
  fail(ErrorCode::config, "unknown data family '" + name + "'");
}

void InitialDataSpec::validate(double box_length) const {
  if (std::abs(far_field.norm() - 1.0) > 1e-14)
    fail(ErrorCode::domain, "far-field value Q must be a unit vector");
  if (family == DataFamily::constant) return;
  if (!(support_radius > 0.0)) fail(ErrorCode::domain, "support radius must be positive");
  if (support_radius > box_length / 8.0)
    fail(ErrorCode::domain, "support radius exceeds L/8 padding rule");
  if (std::abs(center) + support_radius > 0.5 * box_length)
    fail(ErrorCode::domain, "data support leaves the box");
  if (bump_order < 8) fail(ErrorCode::domain, "bump order must be at least 8");
  if (!std::isfinite(amplitude) || !std::isfinite(twist))
    fail(ErrorCode::domain, "amplitude must be finite");
}

double poly_bump(double r, int order) {
  const double q = 1.0 - r * r;
  if (q <= 0.0) return 0.0;
  double out = 1.0;
  for (int i = 0; i < order; ++i) out *= q;
  return out;
}

Vec3 orthogonal_unit(Vec3 q) {
  // Gram-Schmidt against whichever axis is least aligned with q.
  Vec3 seed = std::abs(q.x) <= std::abs(q.y) && std::abs(q.x) <= std::abs(q.z)
                  ? Vec3{1, 0, 0}
                  : (std::abs(q.y) <= std::abs(q.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  Vec3 e = seed - dot(seed, q) * q;
  return (1.0 / e.norm()) * e;
}

Vec3 initial_profile(const InitialDataSpec& spec, double x) {
  const Vec3 q = spec.far_field;
  if (spec.family == DataFamily::constant) return q;
  const double b = poly_bump((x - spec.center) / spec.support_radius, spec.bump_order);
  if (b == 0.0) return q;
  Vec3 e = orthogonal_unit(q);
  if (spec.family == DataFamily::twist_bump) {
    const double beta = spec.twist * b;
    e = std::cos(beta) * e + std::sin(beta) * cross(q, e);
  }
  const double theta = spec.amplitude * b;
  return std::cos(theta) * q + std::sin(theta) * e;
}

VectorField3 make_initial(const GridPtr& grid, const InitialDataSpec& spec) {
  spec.validate(grid->box_length());
  VectorField3 u(grid);
  const auto x = grid->coordinates();
  for (std::size_t j = 0; j < x.size(); ++j) u.set(j, initial_profile(spec, x[j]));
  return u;
}

double spectral_decay_rate(const VectorField3& f, Vec3 far_field) {
  const auto& grid = f.grid();
  VectorField3 g = f - VectorField3(f.grid_ptr(), far_field);
  const auto coeffs = to_spectral(g);
  const auto xi = grid.abs_wavenumbers();
  std::vector<double> mag(xi.size(), 0.0);
  double peak = 0.0;
  for (std::size_t r = 1; r < xi.size(); ++r) {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c[r]);
    mag[r] = std::sqrt(s);
    peak = std::max(peak, mag[r]);
  }
  if (peak == 0.0) return std::numeric_limits<double>::infinity();
  const double floor = 1e-12 * peak;

  // Octave bands starting at the fourth mode; band maximum as envelope.
  std::vector<double> band_xi, band_max;
  const double dk = xi[1];
  for (double lo = 4.0 * dk; lo < grid.nyquist(); lo *= 2.0) {
    const double hi = 2.0 * lo;
    double m = 0.0;
    for (std::size_t r = 1; r < xi.size(); ++r)
      if (xi[r] >= lo && xi[r] < hi) m = std::max(m, mag[r]);
    band_xi.push_back(std::sqrt(lo * std::min(hi, grid.nyquist())));
    band_max.push_back(m);
  }
  const auto top = std::max_element(band_max.begin(), band_max.end()) - band_max.begin();
  std::vector<double> lx, ly;
  bool hit_floor = false;
  for (std::size_t i = std::size_t(top); i < band_max.size(); ++i) {
    if (band_max[i] <= floor) {
      hit_floor = true;
      break;
    }
    lx.push_back(std::log(band_xi[i]));
    ly.push_back(std::log(band_max[i]));
  }
  if (lx.size() < 3) {
    if (hit_floor) return std::numeric_limits<double>::infinity();
    if (lx.size() < 2) return 0.0;
  }
  const double n = double(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

AdmissibilityReport verify_admissibility(const VectorField3& u0, const InitialDataSpec& spec) {
  AdmissibilityReport rep;
  rep.sphere_deviation = sphere_deviation(u0);
  const auto x = u0.grid().coordinates();
  const double radius = spec.family == DataFamily::constant ? 0.0 : spec.support_radius;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(x[j] - spec.center) >= radius)
      rep.far_field_residue = std::max(rep.far_field_residue, (u0.at(j) - spec.far_field).norm());
  }
  const auto coeffs = to_spectral(u0);
  rep.h1_norm = hs_norm(u0.grid(), coeffs, 1.0);
  rep.h_half_norm = hs_norm(u0.grid(), coeffs, 0.5);
  rep.spectral_decay_rate = spectral_decay_rate(u0, spec.far_field);
  rep.sphere_ok = rep.sphere_deviation <= 1e-12;
  rep.far_field_ok = rep.far_field_residue <= 1e-12;
  rep.smooth_ok = rep.spectral_decay_rate > kMinSpectralDecay;
  return rep;
}

}  // namespace hwm
