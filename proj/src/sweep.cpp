#include "hwm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/grid.hpp"
#include "hwm/solver.hpp"
#include "hwm/spectral.hpp"

namespace hwm {

namespace {

// Rough cost ceiling in grid-point steps summed over the ladder.
constexpr double kWorkBudget = 2e11;

double periodic_distance(double x, double c, double L) {
  double d = std::fmod(std::abs(x - c), L);
  return std::min(d, L - d);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (n * sxy - sx * sy) / den;
}

struct RungOutput {
  RungSummary summary;
  Trajectory traj;
};

RungOutput run_rung(const SweepPlan& plan, std::size_t j) {
  const auto started = std::chrono::steady_clock::now();
  const SolverConfig cfg = plan.rung_config(j);
  const GridPtr grid = SpectralGrid::create(cfg.box_length, cfg.num_points);
  const VectorField3 u0 = make_initial(grid, plan.data);

  RungOutput out{{}, evolve(u0, cfg)};
  const Trajectory& traj = out.traj;
  RungSummary& s = out.summary;
  s.eps = cfg.eps;
  s.pairing = plan.pairing()[j];
  s.projected = cfg.project_to_sphere;
  s.max_principle = max_principle_report(traj);
  for (const auto& u : traj.slices) s.sphere_certificate = std::max(s.sphere_certificate, sphere_deviation(u));

  const auto ec = critical_energy(traj);
  s.critical_monotonicity = check_nonincreasing(ec, monotonicity_tolerance(ec.front()));
  s.h_half_initial = hs_norm(traj.slices.front(), 0.5);
  double tail2 = 0.0;
  const double h = traj.stride_time();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    s.h_half_sup = std::max(s.h_half_sup, hs_norm(traj.slices[k], 0.5));
    const double w = (k == 0 || k + 1 == traj.size()) ? 0.5 * h : h;
    const double t = tail_norm(traj.slices[k], s.pairing);
    tail2 += w * t * t;
  }
  s.tail_l2tx = std::sqrt(tail2);
  s.tail_bound = std::sqrt(cfg.final_time) * s.h_half_sup / std::sqrt(s.pairing);
  s.h1_growth_rate = fitted_growth_rate(traj.times, h1_energy(traj));
  s.time_regularity = time_regularity(traj, s.pairing);
  s.battery = evaluate_battery(traj, canonical_battery(cfg.box_length, cfg.final_time));
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

// ||a - b||_{L2_{t,x}} restricted to a window, trapezoid in time.
double windowed_difference(const Trajectory& a, const Trajectory& b, const SweepWindow& win,
                           double center) {
  const auto& grid = *a.grid();
  const double L = grid.box_length(), hx = grid.spacing();
  const double t_end = win.time_fraction * a.config.final_time;
  const double ht = a.stride_time();
  const auto x = grid.coordinates();
  std::vector<char> inside(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    inside[i] = periodic_distance(x[i], center, L) <= win.half_width;

  std::size_t last = 0;
  while (last + 1 < a.size() && a.times[last + 1] <= t_end * (1.0 + 1e-12)) ++last;
  double total = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      const auto ua = a.slices[k].component(c);
      const auto ub = b.slices[k].component(c);
      for (std::size_t i = 0; i < x.size(); ++i)
        if (inside[i]) s += (ua[i] - ub[i]) * (ua[i] - ub[i]);
    }
    const double w = (last == 0) ? 0.0 : ((k == 0 || k == last) ? 0.5 * ht : ht);
    total += w * hx * s;
  }
  return std::sqrt(total);
}

// Low / high split of ||a - b||_{L2_{t,x}} at cutoff n over the full box.
std::pair<double, double> split_difference(const Trajectory& a, const Trajectory& b, double n) {
  const auto low = MultiplierSpec::lp_low(n);
  const double ht = a.stride_time();
  Workspace ws(*a.grid());
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const VectorField3 d = a.slices[k] - b.slices[k];
    const VectorField3 dl = apply_multiplier(*a.grid(), low, d, ws);
    const double w = (k == 0 || k + 1 == a.size()) ? 0.5 * ht : ht;
    const double nl = l2_norm(dl), nh = l2_norm(d - dl);
    lo += w * nl * nl;
    hi += w * nh * nh;
  }
  return {std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

std::vector<double> SweepPlan::geometric_ladder(double eps0, int rungs) {
  if (!(eps0 > 0.0) || rungs < 1) fail(ErrorCode::invalid_argument, "geometric ladder needs eps0 > 0 and rungs >= 1");
  std::vector<double> out;
  for (int j = 0; j < rungs; ++j) out.push_back(std::ldexp(eps0, -j));
  return out;
}

std::vector<double> SweepPlan::pairing() const {
  std::vector<double> out;
  for (double e : eps_ladder) out.push_back(std::round(1.0 / e));
  return out;
}

bool SweepPlan::projected(std::size_t rung) const {
  return rung < project_override.size() ? bool(project_override[rung]) : base.project_to_sphere;
}

SolverConfig SweepPlan::rung_config(std::size_t rung) const {
  SolverConfig cfg = base;
  cfg.eps = eps_ladder.at(rung);
  cfg.project_to_sphere = projected(rung);
  return cfg;
}

void SweepPlan::validate() const {
  if (eps_ladder.size() < 4) fail(ErrorCode::config, "sweep.eps_ladder needs at least 4 rungs");
  for (std::size_t j = 0; j < eps_ladder.size(); ++j) {
    if (!(eps_ladder[j] > 0.0) || !std::isfinite(eps_ladder[j]))
      fail(ErrorCode::config, "sweep.eps_ladder entries must be positive");
    if (j > 0 && !(eps_ladder[j] < eps_ladder[j - 1]))
      fail(ErrorCode::config, "sweep.eps_ladder must be strictly decreasing");
  }
  if (!project_override.empty() && project_override.size() != eps_ladder.size())
    fail(ErrorCode::config, "sweep project override must have one entry per rung");
  if (workers < 1) fail(ErrorCode::config, "sweep.workers must be >= 1");
  if (min_decreasing < 0 || min_decreasing > 27)
    fail(ErrorCode::config, "sweep.min_decreasing must lie in [0, 27]");
  for (std::size_t j = 0; j < eps_ladder.size(); ++j) rung_config(j).validate();
  data.validate(base.box_length);

  const double nyq = M_PI * double(base.num_points) / base.box_length;
  for (double n : pairing())
    if (n > nyq) {
      std::ostringstream os;
      os << "sweep pairing N = " << n << " exceeds the Nyquist wavenumber " << nyq;
      fail(ErrorCode::config, os.str());
    }

  if (windows.empty()) fail(ErrorCode::config, "sweep needs at least one window");
  for (std::size_t n = 0; n < windows.size(); ++n) {
    const auto& w = windows[n];
    if (!(w.time_fraction > 0.0 && w.time_fraction <= 1.0))
      fail(ErrorCode::config, "sweep window time fraction must lie in (0, 1]");
    if (!(w.half_width > 0.0 && w.half_width <= 0.5 * base.box_length))
      fail(ErrorCode::config, "sweep window half width must lie in (0, L/2]");
    if (n > 0 && (w.time_fraction < windows[n - 1].time_fraction ||
                  w.half_width < windows[n - 1].half_width))
      fail(ErrorCode::config, "sweep windows must be nested");
  }

  const double work = double(eps_ladder.size()) * double(base.num_steps()) * double(base.num_points);
  if (work > kWorkBudget) fail(ErrorCode::config, "sweep exceeds the compute budget");
}

SweepReport run_viscosity_sweep(const SweepPlan& plan) {
  plan.validate();
  const std::size_t J = plan.eps_ladder.size();
  std::vector<std::optional<RungOutput>> outputs(J);
  std::vector<std::string> failures(J);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr hard_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= J || stop.load()) return;
      try {
        outputs[j] = run_rung(plan, j);
      } catch (const Error& e) {
        stop = true;
        if (e.code() == ErrorCode::blow_up) {
          failures[j] = e.what();
        } else {
          std::lock_guard lock(error_mutex);
          if (!hard_error) hard_error = std::current_exception();
        }
      } catch (...) {
        stop = true;
        std::lock_guard lock(error_mutex);
        if (!hard_error) hard_error = std::current_exception();
      }
    }
  };
  const int nworkers = std::max(1, std::min<int>(plan.workers, int(J)));
  std::vector<std::thread> pool;
  for (int i = 1; i < nworkers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (hard_error) std::rethrow_exception(hard_error);

  SweepReport report;
  report.plan = plan;
  for (std::size_t j = 0; j < J; ++j) {
    if (!failures[j].empty()) {
      report.aborted = true;
      if (report.abort_reason.empty())
        report.abort_reason = "rung " + std::to_string(j) + ": " + failures[j];
    }
    if (outputs[j]) report.rungs.push_back(outputs[j]->summary);
  }
  if (!report.aborted && report.rungs.size() != J) {
    report.aborted = true;
    report.abort_reason = "sweep stopped before all rungs ran";
  }
  if (report.aborted) return report;

  report.times = outputs[0]->traj.times;
  const double center = plan.data.center;
  report.cauchy.assign(plan.windows.size(), {});
  const auto pairing = plan.pairing();
  for (std::size_t j = 0; j + 1 < J; ++j) {
    const Trajectory& a = outputs[j]->traj;
    const Trajectory& b = outputs[j + 1]->traj;
    for (std::size_t n = 0; n < plan.windows.size(); ++n)
      report.cauchy[n].push_back(windowed_difference(a, b, plan.windows[n], center));
    const auto [lo, hi] = split_difference(a, b, pairing[j + 1]);
    report.cauchy_low.push_back(lo);
    report.cauchy_high.push_back(hi);
  }
  return report;
}

CauchyTrend cauchy_differences(const SweepReport& report) {
  if (report.cauchy.empty() || report.cauchy.front().size() < 3)
    fail(ErrorCode::invalid_argument, "Cauchy trend needs at least 3 adjacent pairs");
  const auto& eps = report.plan.eps_ladder;
  CauchyTrend trend;
  trend.trivially_convergent = true;
  for (const auto& row : report.cauchy)
    for (double d : row)
      if (d != 0.0) trend.trivially_convergent = false;

  for (const auto& row : report.cauchy) {
    bool dec = true;
    for (std::size_t j = 1; j < row.size(); ++j) dec = dec && row[j] < row[j - 1];
    trend.strictly_decreasing.push_back(dec);
    if (trend.trivially_convergent) {
      trend.slopes.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::vector<double> x, y;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!(row[j] > 0.0)) continue;
      x.push_back(-0.5 * std::log(eps[j] * eps[j + 1]));
      y.push_back(std::log(row[j]));
    }
    trend.slopes.push_back(x.size() >= 2 ? ls_slope(x, y) : std::numeric_limits<double>::quiet_NaN());
  }
  return trend;
}

LimitVerdict certify_limit(const SweepReport& report) {
  LimitVerdict v;
  if (report.aborted) {
    v.reasons.push_back("sweep aborted: " + report.abort_reason);
    return v;
  }
  const auto& rungs = report.rungs;
  bool mixed = false;
  for (const auto& r : rungs) mixed = mixed || r.projected != rungs.front().projected;
  if (mixed) v.reasons.push_back("inconsistent flow family");

  // (a) Cauchy trend.
  if (rungs.size() >= 4) {
    const CauchyTrend trend = cauchy_differences(report);
    v.trend_ok = true;
    if (!trend.trivially_convergent)
      for (std::size_t n = 0; n < trend.slopes.size(); ++n)
        if (!(trend.slopes[n] < 0.0)) {
          v.trend_ok = false;
          std::ostringstream os;
          os << "Cauchy trend not negative on window " << n << " (slope " << trend.slopes[n] << ")";
          v.reasons.push_back(os.str());
        }
  } else {
    v.reasons.push_back("too few rungs for a trend");
  }

  // (b) half-wave residual along the ladder, per test function.
  v.battery_size = rungs.empty() ? 0 : int(rungs.front().battery.halfwave.size());
  double scale = 0.0;
  for (const auto& r : rungs)
    for (double x : r.battery.halfwave) scale = std::max(scale, x);
  for (int i = 0; i < v.battery_size; ++i) {
    bool dec = true;
    for (std::size_t j = 1; j < rungs.size(); ++j)
      dec = dec && rungs[j].battery.halfwave[i] < rungs[j - 1].battery.halfwave[i];
    if (dec || scale <= 1e-12) ++v.decreasing_count;
  }
  v.weak_ok = v.decreasing_count >= report.plan.min_decreasing;
  if (!v.weak_ok)
    v.reasons.push_back("half-wave residual decreases for only " + std::to_string(v.decreasing_count) +
                        " of " + std::to_string(v.battery_size) + " test functions");

  // (c) sphere certificate along the ladder.
  v.sphere_ok = true;
  double cmax = 0.0;
  for (const auto& r : rungs) cmax = std::max(cmax, r.sphere_certificate);
  if (cmax > 1e-12)
    for (std::size_t j = 1; j < rungs.size(); ++j)
      if (!(rungs[j].sphere_certificate < rungs[j - 1].sphere_certificate)) v.sphere_ok = false;
  if (!v.sphere_ok) v.reasons.push_back("sphere certificate does not decrease along the ladder");

  std::vector<double> e, c;
  for (const auto& r : rungs) {
    e.push_back(r.eps);
    c.push_back(r.sphere_certificate);
  }
  if (e.size() >= 2) {
    v.envelope_slope = ls_slope(e, c);
    double me = 0, mc = 0;
    for (std::size_t j = 0; j < e.size(); ++j) {
      me += e[j] / double(e.size());
      mc += c[j] / double(c.size());
    }
    v.envelope_intercept = mc - v.envelope_slope * me;
    v.envelope_ok = v.envelope_intercept >= -1e-12 && v.envelope_intercept <= kEnvelopeInterceptTolerance;
  }

  v.passed = !mixed && v.trend_ok && v.weak_ok && v.sphere_ok;
  return v;
}

}  // namespace hwm
