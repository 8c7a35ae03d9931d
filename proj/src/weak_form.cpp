#include "hwm/weak_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/spectral.hpp"

namespace hwm {

namespace {

double ipow(double b, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= b;
  return out;
}

// Time integrals treat each per-slice quantity as piecewise linear between
// stored slices (the interpolant behind the trapezoid rule) and integrate it
// exactly against the known time profile. Gauss nodes on every interval, split
// where the profile has a kink. visit(j, t, wl, wr) receives the node weight
// times the hat functions of slices j and j + 1.
template <class Visit>
void hat_quadrature(const std::vector<double>& times, const std::vector<double>& breaks, Visit&& visit) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  std::vector<double> cuts;
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    const double a = times[j], b = times[j + 1];
    cuts.assign({a});
    for (double c : breaks)
      if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double half = 0.5 * (cuts[k + 1] - cuts[k]), mid = 0.5 * (cuts[k + 1] + cuts[k]);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (double sgn : {-1.0, 1.0}) {
          const double t = mid + sgn * half * x[i];
          const double right = (t - a) / (b - a);
          visit(j, t, half * w[i] * (1.0 - right), half * w[i] * right);
        }
    }
  }
}

}  // namespace

double PolyBump::value(double x) const {
  const double r = (x - center) / width;
  const double q = 1.0 - r * r;
  return q > 0.0 ? ipow(q, order) : 0.0;
}

double PolyBump::derivative(double x) const {
  const double r = (x - center) / width;
  const double q = 1.0 - r * r;
  if (q <= 0.0) return 0.0;
  return -2.0 * order * r * ipow(q, order - 1) / width;
}

double PolyBump::second_derivative(double x) const {
  const double r = (x - center) / width;
  const double q = 1.0 - r * r;
  if (q <= 0.0) return 0.0;
  const double p = order;
  return (-2.0 * p * ipow(q, order - 1) + 4.0 * p * (p - 1.0) * r * r * ipow(q, order - 2)) /
         (width * width);
}

VectorField3 TestFunction::psi(const GridPtr& grid) const {
  VectorField3 out(grid);
  const auto x = grid->coordinates();
  for (std::size_t j = 0; j < x.size(); ++j) out.set(j, space.value(x[j]) * direction);
  return out;
}

VectorField3 TestFunction::laplacian_psi(const GridPtr& grid) const {
  VectorField3 out(grid);
  const auto x = grid->coordinates();
  for (std::size_t j = 0; j < x.size(); ++j)
    out.set(j, space.second_derivative(x[j]) * direction);
  return out;
}

void TestFunction::validate(const SpectralGrid& grid) const {
  const double half = 0.5 * grid.box_length();
  if (!(space.lower() > -half && space.upper() < half))
    fail(ErrorCode::domain, "test function " + label + ": spatial support leaves the box");
  if (time.upper() > horizon * (1.0 + 1e-12))
    fail(ErrorCode::domain, "test function " + label + ": chi does not vanish at T");
  if (time.lower() <= 0.0 && chi(0.0) == 0.0)
    fail(ErrorCode::domain, "test function " + label + ": chi touches t = 0 with chi(0) = 0");
  if (space.order < 2 || time.order < 2)
    fail(ErrorCode::domain, "test function " + label + ": bump order must be at least 2");
}

std::vector<TestFunction> canonical_battery(double box_length, double horizon) {
  const double L = box_length;
  const std::array<PolyBump, 3> spaces{PolyBump{0.0, 0.125 * L, 8},
                                       PolyBump{0.05 * L, 0.078125 * L, 8},
                                       PolyBump{-0.0625 * L, 0.09375 * L, 8}};
  const double T = horizon;
  const std::array<PolyBump, 3> times{PolyBump{0.5 * T, 0.4 * T, 4},
                                      PolyBump{0.35 * T, 0.25 * T, 4},
                                      PolyBump{0.0, 0.8 * T, 4}};
  const double s3 = 1.0 / std::sqrt(3.0);
  const std::array<Vec3, 3> dirs{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{s3, s3, s3}};
  std::vector<TestFunction> out;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) {
        TestFunction phi;
        phi.space = spaces[i];
        phi.time = times[k];
        phi.direction = dirs[m];
        phi.horizon = T;
        phi.label = "s" + std::to_string(i) + "_t" + std::to_string(k) + "_d" + std::to_string(m);
        out.push_back(phi);
      }
  return out;
}

SpaceTimeField as_space_time(const TestFunction& phi, const GridPtr& grid) {
  const VectorField3 psi = phi.psi(grid);
  const VectorField3 lap = phi.laplacian_psi(grid);
  SpaceTimeField f;
  f.value = [psi, phi](double t) { return phi.chi(t) * psi; };
  f.time_derivative = [psi, phi](double t) { return phi.chi_prime(t) * psi; };
  f.laplacian = [lap, phi](double t) { return phi.chi(t) * lap; };
  f.breakpoints = {phi.time.lower(), phi.time.upper()};
  return f;
}

namespace {

void check_horizon(const Trajectory& traj, double horizon) {
  const double T = traj.times.back();
  if (std::abs(T - horizon) > 1e-9 * std::max(1.0, horizon))
    fail(ErrorCode::invalid_argument, "test function horizon does not match the trajectory");
}

}  // namespace

WeakTerms weak_terms(const Trajectory& traj, const SpaceTimeField& phi) {
  traj.validate();
  const std::size_t ns = traj.size();
  const GridPtr& grid = traj.grid();
  // Hat-weighted time averages of phi, phi_t and Delta phi per slice.
  std::vector<VectorField3> val(ns, VectorField3(grid)), der(ns, VectorField3(grid)), lap(ns, VectorField3(grid));
  hat_quadrature(traj.times, phi.breakpoints, [&](std::size_t j, double t, double wl, double wr) {
    const VectorField3 v = phi.value(t), d = phi.time_derivative(t), l = phi.laplacian(t);
    val[j] += wl * v;
    der[j] += wl * d;
    lap[j] += wl * l;
    val[j + 1] += wr * v;
    der[j + 1] += wr * d;
    lap[j + 1] += wr * l;
  });

  const auto quarter = MultiplierSpec::fractional_laplacian(0.5);
  Workspace ws(*grid);
  WeakTerms out;
  for (std::size_t j = 0; j < ns; ++j) {
    const auto& u = traj.slices[j];
    require_same_grid(u, val[j]);
    out.time_term -= inner(u, der[j]);
    out.viscous_term += inner(u, lap[j]);
    const VectorField3 a = apply_multiplier(u.grid(), quarter, cross(val[j], u), ws);
    const VectorField3 b = apply_multiplier(u.grid(), quarter, u, ws);
    out.nonlinear_term += inner(a, b);
  }
  out.initial_term = -inner(traj.slices.front(), phi.value(traj.times.front()));
  return out;
}

WeakTerms weak_terms(const Trajectory& traj, const TestFunction& phi) {
  phi.validate(*traj.grid());
  check_horizon(traj, phi.horizon);
  return weak_terms(traj, as_space_time(phi, traj.grid()));
}

double weak_residual_regularized(const Trajectory& traj, const TestFunction& phi) {
  return std::abs(weak_terms(traj, phi).regularized_signed(traj.config.eps));
}

double weak_residual_halfwave(const Trajectory& traj, const TestFunction& phi) {
  return std::abs(weak_terms(traj, phi).halfwave_signed());
}

BatteryResult evaluate_battery(const Trajectory& traj, const std::vector<TestFunction>& battery) {
  traj.validate();
  const GridPtr& grid = traj.grid();
  for (const auto& phi : battery) {
    phi.validate(*grid);
    check_horizon(traj, phi.horizon);
  }

  // Spatial profiles psi * d shared between test functions.
  using Key = std::tuple<double, double, int, double, double, double>;
  std::map<Key, std::size_t> index;
  std::vector<VectorField3> psi, lap_psi;
  std::vector<std::size_t> which(battery.size());
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const auto& phi = battery[i];
    const Key key{phi.space.center, phi.space.width, phi.space.order,
                  phi.direction.x, phi.direction.y, phi.direction.z};
    auto [it, inserted] = index.emplace(key, psi.size());
    if (inserted) {
      psi.push_back(phi.psi(grid));
      lap_psi.push_back(phi.laplacian_psi(grid));
    }
    which[i] = it->second;
  }

  // Per slice and profile: int u.psi, int u.Delta psi, and the nonlinear pairing.
  const std::size_t ns = traj.size(), np = psi.size();
  std::vector<std::vector<double>> mass(np, std::vector<double>(ns));
  std::vector<std::vector<double>> visc(np, std::vector<double>(ns));
  std::vector<std::vector<double>> pair(np, std::vector<double>(ns));
  const auto quarter = MultiplierSpec::fractional_laplacian(0.5);
  Workspace ws(*grid);
  for (std::size_t j = 0; j < ns; ++j) {
    const auto& u = traj.slices[j];
    const VectorField3 qu = apply_multiplier(*grid, quarter, u, ws);
    for (std::size_t p = 0; p < np; ++p) {
      mass[p][j] = inner(u, psi[p]);
      visc[p][j] = inner(u, lap_psi[p]);
      pair[p][j] = inner(apply_multiplier(*grid, quarter, cross(psi[p], u), ws), qu);
    }
  }

  BatteryResult out;
  std::vector<double> wv(ns), wd(ns);
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const auto& phi = battery[i];
    const std::size_t p = which[i];
    std::fill(wv.begin(), wv.end(), 0.0);
    std::fill(wd.begin(), wd.end(), 0.0);
    hat_quadrature(traj.times, {phi.time.lower(), phi.time.upper()},
                   [&](std::size_t j, double t, double wl, double wr) {
                     const double c = phi.chi(t), cp = phi.chi_prime(t);
                     wv[j] += wl * c;
                     wd[j] += wl * cp;
                     wv[j + 1] += wr * c;
                     wd[j + 1] += wr * cp;
                   });
    WeakTerms terms;
    for (std::size_t j = 0; j < ns; ++j) {
      terms.time_term -= wd[j] * mass[p][j];
      terms.viscous_term += wv[j] * visc[p][j];
      terms.nonlinear_term += wv[j] * pair[p][j];
    }
    terms.initial_term = -phi.chi(0.0) * mass[p][0];
    out.labels.push_back(phi.label);
    out.terms.push_back(terms);
    out.regularized.push_back(std::abs(terms.regularized_signed(traj.config.eps)));
    out.halfwave.push_back(std::abs(terms.halfwave_signed()));
  }
  return out;
}

double pairing_identity_check(const VectorField3& u, const VectorField3& phi_slice) {
  require_same_grid(u, phi_slice);
  const VectorField3 pu = cross(phi_slice, u);
  const double direct =
      inner(pu, apply_multiplier(MultiplierSpec::fractional_laplacian(1.0), u));
  const auto quarter = MultiplierSpec::fractional_laplacian(0.5);
  const double split = inner(apply_multiplier(quarter, pu), apply_multiplier(quarter, u));
  return std::abs(direct - split);
}

double pairing_scale(const VectorField3& u, const VectorField3& phi_slice) {
  return 1.0 + l2_norm(cross(phi_slice, u)) *
                   l2_norm(apply_multiplier(MultiplierSpec::fractional_laplacian(1.0), u));
}

}  // namespace hwm
