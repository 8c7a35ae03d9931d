#include <cmath>
#include <random>

#include "doctest.h"
#include "hwm/diagnostics.hpp"
#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/initial_data.hpp"
#include "hwm/solver.hpp"
#include "hwm/spectral.hpp"
#include "oracle.hpp"

using namespace hwm;

namespace {

SolverConfig config(double eps, double T, double dt, std::size_t m = 256) {
  SolverConfig c;
  c.eps = eps;
  c.final_time = T;
  c.dt = dt;
  c.box_length = 16.0;
  c.num_points = m;
  c.picard.window = T;
  return c;
}

Trajectory run(const SolverConfig& c, double amplitude = M_PI) {
  InitialDataSpec s;
  s.amplitude = amplitude;
  return evolve(make_initial(SpectralGrid::create(c.box_length, c.num_points), s), c);
}

double at_time(const Trajectory& traj, const std::vector<double>& interior, double t) {
  for (std::size_t j = 1; j + 1 < traj.size(); ++j)
    if (std::abs(traj.times[j] - t) < 1e-12) return interior[j - 1];
  FAIL("time not found");
  return 0.0;
}

}  // namespace

TEST_CASE("tolerance formulas") {
  CHECK(monotonicity_tolerance(0.0) == doctest::Approx(1e-8));
  CHECK(monotonicity_tolerance(3.0) == doctest::Approx(4e-8));
  CHECK(max_principle_tolerance(1e-3) == doctest::Approx(1e-6 + 1e-6));
}

TEST_CASE("monotonicity report") {
  auto r = check_nonincreasing({3, 2, 1}, 1e-8);
  CHECK(r.passed);
  CHECK(r.strictly_decreasing);
  CHECK(r.max_increase == doctest::Approx(-1.0));
  r = check_nonincreasing({3, 3, 3}, 1e-8);
  CHECK(r.passed);
  CHECK_FALSE(r.strictly_decreasing);
  r = check_nonincreasing({1, 1 + 2e-8}, 1e-8);
  CHECK_FALSE(r.passed);
}

TEST_CASE("fits") {
  std::vector<double> x{4, 8, 16, 32}, y;
  for (double v : x) y.push_back(2.5 * std::pow(v, -1.5));
  CHECK(loglog_slope(x, y) == doctest::Approx(-1.5));
  CHECK(richardson_order(1 + 0.04, 1 + 0.01, 1 + 0.0025) == doctest::Approx(2.0));
  CHECK(richardson_order(0.1, 0.05, 0.025) == doctest::Approx(1.0));
  std::vector<double> t{0, 0.1, 0.2, 0.3}, e;
  for (double v : t) e.push_back(2.0 * std::exp(-0.7 * v));
  CHECK(fitted_growth_rate(t, e) == doctest::Approx(-0.7));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), Error);
}

TEST_CASE("tail bound is exact on arbitrary slices") {
  std::mt19937_64 rng(8);
  const auto g = SpectralGrid::create(16.0, 512);
  Trajectory traj;
  traj.config = config(0.1, 0.3, 0.1);
  for (int j = 0; j < 4; ++j) {
    traj.times.push_back(0.1 * j);
    traj.slices.push_back(oracle::noise(g, rng));
  }
  const std::vector<double> cut{8, 16, 32, 64};
  const auto rep = tail_norm(traj, cut);
  CHECK(rep.violations == 0);
  CHECK(rep.min_slack > 0.0);
  for (std::size_t i = 0; i < cut.size(); ++i)
    for (std::size_t j = 0; j < traj.size(); ++j)
      CHECK(rep.tail[i][j] == doctest::Approx(tail_norm(traj.slices[j], cut[i])).epsilon(1e-12));
}

TEST_CASE("tail bound is sharp for a single mode") {
  const auto g = SpectralGrid::create(16.0, 256);
  const double xi = 2 * M_PI * 21 / 16.0;  // ~8.25
  const auto x = g->coordinates();
  std::array<std::vector<double>, 3> comp{std::vector<double>(256), std::vector<double>(256, 0.0),
                                          std::vector<double>(256, 0.0)};
  for (std::size_t j = 0; j < 256; ++j) comp[0][j] = std::cos(xi * x[j]);
  const VectorField3 f(g, comp);
  const double bound = hs_norm(f, 0.5) / std::sqrt(8.0);
  CHECK(tail_norm(f, 8.0) <= bound);
  CHECK(tail_norm(f, 8.0) == doctest::Approx(bound).epsilon(0.02));
  CHECK(tail_norm(f, 9.0) < 1e-12);
}

TEST_CASE("commutator") {
  std::mt19937_64 rng(12);
  const auto g = SpectralGrid::create(16.0, 256);
  const auto u = oracle::smooth(g, rng, 30);
  const VectorField3 c(g, Vec3{0.2, 0.3, -1});
  CHECK(commutator_norm(u, c) < 1e-12 * l2_norm(u));
  // Smooth phi: the commutator of high-frequency pieces decays with N.
  InitialDataSpec s;
  const auto phi = make_initial(g, s) - VectorField3(g, s.far_field);
  const auto v = make_initial(g, s);
  std::vector<double> n{4, 8, 16, 32}, val;
  for (double k : n) val.push_back(commutator_norm(apply_multiplier(MultiplierSpec::lp_high(k), v), phi));
  for (std::size_t i = 1; i < val.size(); ++i) CHECK(val[i] < val[i - 1]);
}

TEST_CASE("far field") {
  const auto c = config(0.1, 0.1, 1e-3);
  const auto traj = run(c);
  const auto ff = far_field_report(traj, {0, 0, 1}, 2.0);
  CHECK(ff.front() == 0.0);
  CHECK(ff.back() > 0.0);  // the nonlocal flow spreads immediately
  CHECK(ff.back() < 1e-2);
  CHECK_THROWS_AS(far_field_report(traj, {0, 0, 1}, 8.0), Error);
  CHECK_THROWS_AS(far_field_distance(traj.slices[0], {0, 0, 1}, 0.0), Error);
}

TEST_CASE("series, energies and maximum principle on a short run") {
  auto c = config(0.05, 0.2, 1e-3, 512);
  c.output_stride = 10;
  const auto traj = run(c);
  SeriesOptions so;
  const auto s = compute_series(traj, so);
  CHECK(s.times.size() == traj.size());
  CHECK(s.tail.size() == 4);
  CHECK(s.e_c.size() == traj.size());
  const auto mono = check_nonincreasing(s.e_c, monotonicity_tolerance(s.e_c.front()));
  CHECK(mono.passed);
  const auto mp = max_principle_report(traj);
  CHECK(mp.passed);
  CHECK(mp.max_v <= 1.0 + 1e-12);
  CHECK(mp.min_v < 1.0);  // |u|^2 dips below 1 under the viscous flow
  const auto tr = time_regularity(traj, 8.0);
  CHECK(tr.projected <= tr.full);
  CHECK(tr.projected > 0.0);
}

TEST_CASE("identity residuals refine at second order") {
  // Residual at t = 0.1 for dt, dt/2, dt/4 with every step stored.
  std::vector<double> en, cv, ck;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const auto traj = run(config(0.1, 0.2, dt), 1.0);
    en.push_back(at_time(traj, energy_identity_residual(traj), 0.1));
    cv.push_back(at_time(traj, constraint_equation_residual(traj), 0.1));
    ck.push_back(at_time(traj, critical_energy_identity_residual(traj), 0.1));
  }
  CHECK(en[2] < en[1]);
  CHECK(richardson_order(en[0], en[1], en[2]) >= 1.9);
  CHECK(richardson_order(cv[0], cv[1], cv[2]) >= 1.9);
  CHECK(richardson_order(ck[0], ck[1], ck[2]) >= 1.9);

  // Dropping the source term leaves an O(1) residual.
  const auto traj = run(config(0.1, 0.2, 1e-3), 1.0);
  const auto with = constraint_equation_residual(traj, true);
  const auto without = constraint_equation_residual(traj, false);
  const auto src = constraint_source_magnitude(traj);
  CHECK(*std::max_element(without.begin(), without.end()) > 100 * *std::max_element(with.begin(), with.end()));
  CHECK(*std::max_element(src.begin(), src.end()) > 0.0);
}

TEST_CASE("short trajectories are rejected") {
  auto c = config(0.1, 1e-3, 1e-3);
  const auto traj = run(c);
  CHECK(traj.size() == 2);
  CHECK_THROWS_AS(energy_identity_residual(traj), Error);
  CHECK_THROWS_AS(constraint_equation_residual(traj), Error);
}
