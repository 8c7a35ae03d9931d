#include "hwm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/solver.hpp"
#include "hwm/spectral.hpp"

namespace hwm {

namespace {

void require_slices(const Trajectory& traj, std::size_t n, const char* what) {
  if (traj.size() < n)
    fail(ErrorCode::invalid_argument, std::string(what) + " needs at least " +
                                          std::to_string(n) + " slices");
}

// Spectral gains applied to one component at a time.
struct Ops {
  const SpectralGrid& grid;
  Workspace ws;
  std::vector<Complex> dx, lap;

  explicit Ops(const SpectralGrid& g)
      : grid(g),
        ws(g),
        dx(MultiplierSpec::derivative().table(g)),
        lap(MultiplierSpec::fractional_laplacian(2.0).table(g)) {
    for (auto& c : lap) c = -c;
  }
  VectorField3 apply(const std::vector<Complex>& gains, const VectorField3& f) {
    VectorField3 out(f.grid_ptr());
    for (int k = 0; k < 3; ++k) apply_multiplier(grid, gains, f.component(k), out.component(k), ws);
    return out;
  }
  std::vector<double> apply(const std::vector<Complex>& gains, const std::vector<double>& f) {
    std::vector<double> out(f.size());
    apply_multiplier(grid, gains, f, out, ws);
    return out;
  }
};

double periodic_distance(double x, double c, double box) {
  double d = std::fmod(std::abs(x - c), box);
  return std::min(d, box - d);
}

}  // namespace

std::vector<double> critical_energy(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& u : traj.slices) {
    const double n = hs_norm(u, 0.5);
    out.push_back(0.5 * n * n);
  }
  return out;
}

std::vector<double> h1_energy(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& u : traj.slices) {
    const double n = hs_norm(u, 1.0);
    out.push_back(0.5 * n * n);
  }
  return out;
}

double monotonicity_tolerance(double ec0) { return 1e-8 * (1.0 + ec0); }

MonotonicityReport check_nonincreasing(const std::vector<double>& series, double tolerance) {
  MonotonicityReport rep;
  rep.tolerance = tolerance;
  rep.max_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < series.size(); ++j)
    rep.max_increase = std::max(rep.max_increase, series[j] - series[j - 1]);
  if (series.size() < 2) rep.max_increase = 0.0;
  rep.strictly_decreasing = series.size() >= 2 && rep.max_increase < 0.0;
  rep.passed = rep.max_increase <= tolerance;
  return rep;
}

std::vector<double> critical_energy_identity_residual(const Trajectory& traj) {
  require_slices(traj, 3, "critical energy identity");
  const auto ec = critical_energy(traj);
  const double h = traj.stride_time();
  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
    const double lhs = (ec[j + 1] - ec[j - 1]) / (2.0 * h);
    const double n = hs_norm(traj.slices[j], 1.5);
    const double rhs = -traj.config.eps * n * n;
    out.push_back(std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  return out;
}

std::vector<double> energy_identity_residual(const Trajectory& traj) {
  require_slices(traj, 3, "energy identity");
  const auto e = h1_energy(traj);
  const double h = traj.stride_time();
  const double eps = traj.config.eps;
  Ops ops(*traj.grid());
  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
    const auto& u = traj.slices[j];
    const VectorField3 uxx = ops.apply(ops.lap, u);
    const VectorField3 n = nonlinearity(u, traj.config.dealias);
    const double rhs = -eps * inner(uxx, uxx) - inner(n, uxx);
    const double lhs = (e[j + 1] - e[j - 1]) / (2.0 * h);
    out.push_back(std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  return out;
}

double fitted_growth_rate(const std::vector<double>& times, const std::vector<double>& energy) {
  std::vector<double> t, y;
  for (std::size_t j = 0; j < times.size() && j < energy.size(); ++j) {
    if (energy[j] > 0.0) {
      t.push_back(times[j]);
      y.push_back(std::log(energy[j]));
    }
  }
  if (t.size() < 2) return 0.0;
  const double n = double(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double den = n * stt - st * st;
  return den == 0.0 ? 0.0 : (n * sty - st * sy) / den;
}

double max_principle_tolerance(double dt) { return 1e-6 + kMaxPrincipleDtConstant * dt * dt; }

MaxPrincipleReport max_principle_report(const Trajectory& traj) {
  require_slices(traj, 1, "max principle report");
  MaxPrincipleReport rep;
  rep.max_v = -std::numeric_limits<double>::infinity();
  rep.min_v = std::numeric_limits<double>::infinity();
  const auto x = traj.grid()->coordinates();
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const auto v = squared_magnitude(traj.slices[j]);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > rep.max_v) {
        rep.max_v = v[i];
        rep.t_at_max = traj.times[j];
        rep.x_at_max = x[i];
      }
      rep.min_v = std::min(rep.min_v, v[i]);
    }
  }
  rep.tolerance = max_principle_tolerance(traj.config.dt);
  rep.passed = rep.max_v <= 1.0 + rep.tolerance;
  return rep;
}

namespace {

std::vector<double> constraint_residual_impl(const Trajectory& traj, bool include_source,
                                             std::vector<double>* source_out) {
  require_slices(traj, 3, "constraint equation residual");
  const double h = traj.stride_time();
  const double eps = traj.config.eps;
  Ops ops(*traj.grid());
  std::vector<std::vector<double>> v;
  v.reserve(traj.size());
  for (const auto& u : traj.slices) v.push_back(squared_magnitude(u));

  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
    const auto vxx = ops.apply(ops.lap, v[j]);
    const VectorField3 ux = ops.apply(ops.dx, traj.slices[j]);
    const auto grad2 = squared_magnitude(ux);
    double rmax = 0.0, smax = 0.0;
    for (std::size_t i = 0; i < vxx.size(); ++i) {
      const double source = 2.0 * eps * grad2[i];
      double r = (v[j + 1][i] - v[j - 1][i]) / (2.0 * h) - eps * vxx[i];
      if (include_source) r += source;
      rmax = std::max(rmax, std::abs(r));
      smax = std::max(smax, source);
    }
    out.push_back(rmax / (1.0 + smax));
    if (source_out) source_out->push_back(smax);
  }
  return out;
}

}  // namespace

std::vector<double> constraint_equation_residual(const Trajectory& traj, bool include_source) {
  return constraint_residual_impl(traj, include_source, nullptr);
}

std::vector<double> constraint_source_magnitude(const Trajectory& traj) {
  std::vector<double> s;
  constraint_residual_impl(traj, true, &s);
  return s;
}

double far_field_distance(const VectorField3& u, Vec3 far_field, double radius,
                                       double center) {
  const double box = u.grid().box_length();
  if (!(radius > 0.0) || radius >= 0.5 * box)
    fail(ErrorCode::domain, "far-field radius must lie in (0, L/2)");
  double m = 0.0;
  const auto x = u.grid().coordinates();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (periodic_distance(x[i], center, box) > radius)
      m = std::max(m, (u.at(i) - far_field).norm());
  return m;
}

std::vector<double> far_field_report(const Trajectory& traj, Vec3 far_field, double radius,
                                     double center) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& u : traj.slices)
    out.push_back(far_field_distance(u, far_field, radius, center));
  return out;
}

double tail_norm(const VectorField3& u, double cutoff) {
  return l2_norm(apply_multiplier(MultiplierSpec::lp_high(cutoff), u));
}

TailReport tail_norm(const Trajectory& traj, const std::vector<double>& cutoffs) {
  TailReport rep;
  rep.cutoffs = cutoffs;
  rep.min_slack = std::numeric_limits<double>::infinity();
  const auto& grid = *traj.grid();
  for (double n : cutoffs) MultiplierSpec::lp_high(n).validate(grid);
  rep.tail.assign(cutoffs.size(), {});
  rep.bound.assign(cutoffs.size(), {});
  for (const auto& u : traj.slices) {
    const auto coeffs = to_spectral(u);
    const double half = hs_norm(grid, coeffs, 0.5);
    const auto xi = grid.abs_wavenumbers();
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
      // Sharp cutoff: the tail is a partial Parseval sum.
      double sum = 0.0;
      for (const auto& c : coeffs)
        for (std::size_t r = 0; r < xi.size(); ++r)
          if (xi[r] >= cutoffs[i])
            sum += ((r == 0 || grid.is_nyquist(r)) ? 1.0 : 2.0) * std::norm(c[r]);
      const double tail = std::sqrt(grid.box_length() * sum);
      const double bound = half / std::sqrt(cutoffs[i]);
      rep.tail[i].push_back(tail);
      rep.bound[i].push_back(bound);
      rep.min_slack = std::min(rep.min_slack, bound - tail);
      if (tail > bound) ++rep.violations;
    }
  }
  return rep;
}

double commutator_norm(const VectorField3& u, const VectorField3& phi) {
  require_same_grid(u, phi);
  const auto quarter = MultiplierSpec::fractional_laplacian(0.5);
  const VectorField3 a = apply_multiplier(quarter, cross(u, phi));
  const VectorField3 b = cross(apply_multiplier(quarter, u), phi);
  return l2_norm(a - b);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(ErrorCode::invalid_argument, "log-log fit needs at least two matching points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double richardson_order(double r1, double r2, double r3) {
  return std::log2(std::abs(r1 - r2) / std::abs(r2 - r3));
}

TimeRegularity time_regularity(const Trajectory& traj, double cutoff) {
  require_slices(traj, 2, "time regularity");
  const double h = traj.stride_time();
  const auto low = MultiplierSpec::lp_low(cutoff);
  TimeRegularity out;
  double proj = 0.0, full = 0.0;
  for (std::size_t j = 0; j + 1 < traj.size(); ++j) {
    VectorField3 d = traj.slices[j + 1] - traj.slices[j];
    d *= 1.0 / h;
    const double f = l2_norm(d);
    const double p = l2_norm(apply_multiplier(low, d));
    full += h * f * f;
    proj += h * p * p;
  }
  out.projected = std::sqrt(proj);
  out.full = std::sqrt(full);
  return out;
}

DiagnosticsSeries compute_series(const Trajectory& traj, const SeriesOptions& opts) {
  DiagnosticsSeries s;
  s.times = traj.times;
  s.e_h1 = h1_energy(traj);
  s.e_c = critical_energy(traj);
  for (const auto& u : traj.slices) s.sphere_dev.push_back(sphere_deviation(u));
  s.far_field = far_field_report(traj, opts.far_field, opts.far_radius, opts.center);
  const auto tails = tail_norm(traj, opts.tail_cutoffs);
  s.tail_cutoffs = tails.cutoffs;
  s.tail = tails.tail;
  return s;
}

}  // namespace hwm
