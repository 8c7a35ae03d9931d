#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/initial_data.hpp"
#include "hwm/solver.hpp"
#include "hwm/weak_form.hpp"
#include "oracle.hpp"

using namespace hwm;

namespace {

Trajectory run(double eps, double T, double dt, double amplitude = M_PI) {
  SolverConfig c;
  c.eps = eps;
  c.final_time = T;
  c.dt = dt;
  c.box_length = 16.0;
  c.num_points = 512;
  c.picard.window = T;
  InitialDataSpec s;
  s.amplitude = amplitude;
  return evolve(make_initial(SpectralGrid::create(16.0, 512), s), c);
}

}  // namespace

TEST_CASE("bump derivatives against finite differences") {
  const PolyBump b{0.3, 1.7, 8};
  const double h = 1e-5;
  for (double x : {-1.0, 0.0, 0.3, 1.2, 1.9}) {
    CHECK(b.derivative(x) == doctest::Approx((b.value(x + h) - b.value(x - h)) / (2 * h)).epsilon(1e-7));
    CHECK(b.second_derivative(x) ==
          doctest::Approx((b.derivative(x + h) - b.derivative(x - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(b.value(2.0) == 0.0);
  CHECK(b.derivative(-1.5) == 0.0);
  CHECK(b.lower() == doctest::Approx(-1.4));
  CHECK(b.upper() == doctest::Approx(2.0));
}

TEST_CASE("canonical battery") {
  const auto grid = SpectralGrid::create(16.0, 256);
  const auto battery = canonical_battery(16.0, 1.0);
  CHECK(battery.size() == 27);
  std::set<std::string> labels;
  int touching = 0;
  for (const auto& phi : battery) {
    CHECK_NOTHROW(phi.validate(*grid));
    CHECK(phi.chi(1.0) == 0.0);
    CHECK(phi.direction.norm() == doctest::Approx(1.0));
    labels.insert(phi.label);
    touching += phi.touches_initial_time();
  }
  CHECK(labels.size() == 27);
  CHECK(touching == 9);
}

TEST_CASE("test function validation") {
  const auto grid = SpectralGrid::create(16.0, 256);
  TestFunction phi = canonical_battery(16.0, 1.0).front();
  phi.space.center = 7.0;
  CHECK_THROWS_AS(phi.validate(*grid), Error);
  phi = canonical_battery(16.0, 1.0).front();
  phi.time = {0.9, 0.4, 4};  // still alive at T
  CHECK_THROWS_AS(phi.validate(*grid), Error);
  phi.time = {-0.4, 0.4, 4};  // chi(0) = 0 with support reaching t = 0
  CHECK_THROWS_AS(phi.validate(*grid), Error);
}

TEST_CASE("pairing identity") {
  std::mt19937_64 rng(21);
  const auto grid = SpectralGrid::create(16.0, 256);
  const auto phi = canonical_battery(16.0, 1.0)[4];
  for (int t = 0; t < 5; ++t) {
    const auto u = oracle::smooth(grid, rng, 40);
    const auto p = phi.psi(grid);
    CHECK(pairing_identity_check(u, p) <= 1e-12 * pairing_scale(u, p));
  }
}

TEST_CASE("sign of the nonlinear pairing") {
  // For a solution u_t = u x Lu + eps u_xx and phi = psi d,
  // int u_t . phi = int (phi x u) . Lu must equal the nonlinear term.
  const auto grid = SpectralGrid::create(16.0, 512);
  InitialDataSpec s;
  const auto u = make_initial(grid, s);
  const auto psi = canonical_battery(16.0, 1.0)[1].psi(grid);
  const double direct = inner(nonlinearity(u), psi);
  const auto quarter = MultiplierSpec::fractional_laplacian(0.5);
  const double split = inner(apply_multiplier(quarter, cross(psi, u)), apply_multiplier(quarter, u));
  CHECK(direct == doctest::Approx(split).epsilon(1e-10));
  CHECK(std::abs(direct) > 1e-3);
}

TEST_CASE("factorized battery equals the reference quadrature") {
  const auto traj = run(0.05, 0.2, 1e-3);
  const auto battery = canonical_battery(16.0, 0.2);
  const auto fast = evaluate_battery(traj, battery);
  REQUIRE(fast.labels.size() == 27);
  for (std::size_t i = 0; i < battery.size(); i += 4) {
    const auto slow = weak_terms(traj, battery[i]);
    CHECK(fast.terms[i].time_term == doctest::Approx(slow.time_term).epsilon(1e-11));
    CHECK(fast.terms[i].initial_term == doctest::Approx(slow.initial_term).epsilon(1e-11));
    CHECK(fast.terms[i].viscous_term == doctest::Approx(slow.viscous_term).epsilon(1e-11));
    CHECK(fast.terms[i].nonlinear_term == doctest::Approx(slow.nonlinear_term).epsilon(1e-11));
    CHECK(fast.halfwave[i] == doctest::Approx(weak_residual_halfwave(traj, battery[i])).epsilon(1e-9));
  }
}

TEST_CASE("weak terms are linear in the test field") {
  const auto traj = run(0.05, 0.2, 1e-3);
  const auto battery = canonical_battery(16.0, 0.2);
  const auto a = as_space_time(battery[2], traj.grid());
  const auto b = as_space_time(battery[13], traj.grid());
  SpaceTimeField sum;
  sum.value = [&](double t) { return a.value(t) + 2.0 * b.value(t); };
  sum.time_derivative = [&](double t) { return a.time_derivative(t) + 2.0 * b.time_derivative(t); };
  sum.laplacian = [&](double t) { return a.laplacian(t) + 2.0 * b.laplacian(t); };
  sum.breakpoints = a.breakpoints;
  sum.breakpoints.insert(sum.breakpoints.end(), b.breakpoints.begin(), b.breakpoints.end());
  const auto ws = weak_terms(traj, sum);
  const auto wa = weak_terms(traj, a), wb = weak_terms(traj, b);
  CHECK(ws.lhs() == doctest::Approx(wa.lhs() + 2 * wb.lhs()).epsilon(1e-12));
  CHECK(ws.nonlinear_term == doctest::Approx(wa.nonlinear_term + 2 * wb.nonlinear_term).epsilon(1e-12));
}

TEST_CASE("regularized weak identity holds on computed solutions") {
  std::vector<double> worst;
  for (double dt : {2e-3, 1e-3}) {
    const auto traj = run(0.05, 0.2, dt);
    const auto res = evaluate_battery(traj, canonical_battery(16.0, 0.2));
    double w = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < res.terms.size(); ++i) {
      w = std::max(w, res.regularized[i]);
      scale = std::max(scale, std::abs(res.terms[i].nonlinear_term));
    }
    CHECK(w < 1e-3 * scale);
    worst.push_back(w);
  }
  // Second-order time quadrature and stepping.
  CHECK(worst[1] < 0.35 * worst[0]);
}

TEST_CASE("horizon mismatch is rejected") {
  const auto traj = run(0.1, 0.1, 1e-3);
  CHECK_THROWS_AS(evaluate_battery(traj, canonical_battery(16.0, 0.2)), Error);
}

TEST_CASE("a constant trajectory balances to rounding") {
  SolverConfig c;
  c.eps = 0.05;
  c.final_time = 0.2;
  c.dt = 1e-3;
  c.box_length = 16.0;
  c.num_points = 256;
  c.picard.window = 0.01;
  const auto traj = evolve(VectorField3(SpectralGrid::create(16.0, 256), Vec3{0.6, 0.0, 0.8}), c);
  const auto res = evaluate_battery(traj, canonical_battery(16.0, 0.2));
  for (std::size_t i = 0; i < res.terms.size(); ++i) {
    CHECK(res.halfwave[i] <= 1e-13);
    // int Delta psi vanishes only up to spatial quadrature of the C^7 bump.
    CHECK(res.regularized[i] <= 1e-10);
  }
}
