#include <cmath>

#include "doctest.h"
#include "hwm/error.hpp"
#include "hwm/sweep.hpp"

using namespace hwm;

namespace {

// Small-amplitude ladder that runs in about a second.
SweepPlan small_plan(std::size_t m = 512) {
  SweepPlan p;
  p.eps_ladder = {0.1, 0.05, 0.025, 0.0125};
  p.base.final_time = 0.1;
  p.base.dt = 5e-4;
  p.base.box_length = 16.0;
  p.base.num_points = m;
  p.base.picard.window = 0.01;
  p.data.amplitude = 0.02;
  p.data.support_radius = 2.0;
  p.windows = {{0.5, 2.0}, {1.0, 4.0}, {1.0, 8.0}};
  return p;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("plan helpers") {
  const auto l = SweepPlan::geometric_ladder(0.1, 4);
  REQUIRE(l.size() == 4);
  CHECK(l[3] == doctest::Approx(0.0125));
  auto p = small_plan();
  const auto n = p.pairing();
  CHECK(n == std::vector<double>{10, 20, 40, 80});
  CHECK_FALSE(p.projected(0));
  p.project_override = {false, true, false, false};
  CHECK(p.projected(1));
  CHECK(p.rung_config(2).eps == doctest::Approx(0.025));
}

TEST_CASE("plan validation") {
  auto p = small_plan();
  CHECK_NOTHROW(p.validate());
  p.eps_ladder = {0.1, 0.05, 0.025};
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::config);
  p = small_plan();
  p.eps_ladder = {0.1, 0.05, 0.05, 0.01};
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::config);
  p = small_plan(256);  // Nyquist 50 < N = 80
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::config);
  p = small_plan();
  p.windows = {{1.0, 4.0}, {0.5, 8.0}};
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::config);
  p = small_plan();
  p.windows = {{1.0, 9.0}};
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::config);
  p = small_plan();
  p.workers = 0;
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::config);
}

TEST_CASE("constant data converges trivially") {
  auto p = small_plan();
  p.data.family = DataFamily::constant;
  const auto rep = run_viscosity_sweep(p);
  REQUIRE_FALSE(rep.aborted);
  for (const auto& row : rep.cauchy)
    for (double d : row) CHECK(d == 0.0);
  const auto trend = cauchy_differences(rep);
  CHECK(trend.trivially_convergent);
  const auto v = certify_limit(rep);
  CHECK(v.passed);
  CHECK(v.decreasing_count == 27);
}

TEST_CASE("small-data ladder: trend, windows, verdict") {
  const auto rep = run_viscosity_sweep(small_plan());
  REQUIRE_FALSE(rep.aborted);
  REQUIRE(rep.rungs.size() == 4);
  REQUIRE(rep.cauchy.size() == 3);
  // Bigger window, bigger norm.
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(rep.cauchy[0][j] <= rep.cauchy[1][j]);
    CHECK(rep.cauchy[1][j] <= rep.cauchy[2][j]);
    // Low and high parts recombine to the full-box difference.
    CHECK(std::hypot(rep.cauchy_low[j], rep.cauchy_high[j]) == doctest::Approx(rep.cauchy[2][j]).epsilon(1e-10));
  }
  for (const auto& r : rep.rungs) {
    CHECK(r.tail_l2tx <= r.tail_bound);
    CHECK(r.max_principle.passed);
    CHECK(r.critical_monotonicity.passed);
    CHECK(r.time_regularity.projected <= r.time_regularity.full);
  }
  const auto trend = cauchy_differences(rep);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(trend.slopes[n] < 0.0);
    CHECK(trend.strictly_decreasing[n]);
  }
  const auto v = certify_limit(rep);
  CHECK(v.passed);
  CHECK(v.envelope_ok);
  CHECK(v.reasons.empty());
}

TEST_CASE("a projected rung in the ladder is caught") {
  auto p = small_plan();
  p.project_override = {false, false, true, false};
  const auto v = certify_limit(run_viscosity_sweep(p));
  CHECK_FALSE(v.passed);
  REQUIRE_FALSE(v.reasons.empty());
  CHECK(v.reasons.front() == "inconsistent flow family");
}

TEST_CASE("worker count and resolution do not change the verdict") {
  auto p = small_plan();
  const auto a = run_viscosity_sweep(p);
  p.workers = 3;
  const auto b = run_viscosity_sweep(p);
  for (std::size_t n = 0; n < a.cauchy.size(); ++n)
    for (std::size_t j = 0; j < a.cauchy[n].size(); ++j) CHECK(a.cauchy[n][j] == b.cauchy[n][j]);
  for (std::size_t j = 0; j < a.rungs.size(); ++j) {
    CHECK(a.rungs[j].sphere_certificate == b.rungs[j].sphere_certificate);
    CHECK(a.rungs[j].battery.halfwave == b.rungs[j].battery.halfwave);
  }

  const auto va = certify_limit(a);
  const auto vb = certify_limit(run_viscosity_sweep(small_plan(1024)));
  CHECK(va.passed == vb.passed);
  CHECK(va.trend_ok == vb.trend_ok);
  CHECK(va.weak_ok == vb.weak_ok);
  CHECK(va.sphere_ok == vb.sphere_ok);
  CHECK(va.envelope_ok == vb.envelope_ok);
}

TEST_CASE("trend needs three pairs") {
  SweepReport rep;
  rep.plan = small_plan();
  rep.cauchy = {{0.3, 0.2}};
  CHECK(code_of([&] { cauchy_differences(rep); }) == ErrorCode::invalid_argument);
}
