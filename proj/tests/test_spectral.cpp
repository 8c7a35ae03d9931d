#include <cmath>
#include <random>

#include "doctest.h"
#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/spectral.hpp"
#include "oracle.hpp"

using namespace hwm;
using oracle::cplx;

namespace {

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  const auto g = SpectralGrid::create(16.0, 64);
  CHECK(g->spacing() == doctest::Approx(0.25));
  CHECK(g->coordinates().front() == doctest::Approx(-8.0));
  CHECK(g->coordinates().back() == doctest::Approx(8.0 - 0.25));
  CHECK(g->nyquist() == doctest::Approx(M_PI * 64 / 16));
  CHECK(g->spectral_size() == 33);
  CHECK(g->is_nyquist(32));
  CHECK(g->abs_wavenumbers()[32] == doctest::Approx(g->nyquist()));
  const auto sw = g->signed_wavenumbers();
  CHECK(sw.front() == doctest::Approx(-g->nyquist()));
  CHECK(sw.back() == doctest::Approx(2 * M_PI * 31 / 16));
  CHECK(g->padded().size() >= 96);
  CHECK(g->padded().size() % 2 == 0);

  expect_code(ErrorCode::domain, [] { SpectralGrid::create(16.0, 63); });
  expect_code(ErrorCode::domain, [] { SpectralGrid::create(16.0, 6); });
  expect_code(ErrorCode::domain, [] { SpectralGrid::create(-1.0, 64); });
  expect_code(ErrorCode::domain, [] { SpectralGrid::create(std::nan(""), 64); });
}

TEST_CASE("transform round trip and normalization") {
  std::mt19937_64 rng(1);
  const auto g = SpectralGrid::create(2 * M_PI, 32);
  const auto f = oracle::noise(g, rng);
  const auto c = to_spectral(f);
  std::vector<double> comp(f.component(0).begin(), f.component(0).end());
  const auto ref = oracle::dft(comp);
  // Half-spectrum index r <-> oracle index r + M/2; Nyquist at oracle index 0.
  for (std::size_t r = 0; r < 16; ++r) CHECK(std::abs(c[0][r] - ref[r + 16]) < 1e-13);
  CHECK(std::abs(c[0][16] - ref[0]) < 1e-13);
  CHECK(oracle::max_abs_diff(to_physical(g, c), f) < 1e-13);
}

TEST_CASE("multipliers match the brute-force DFT oracle") {
  std::mt19937_64 rng(7);
  for (double L : {2 * M_PI, 16.0}) {
    const auto g = SpectralGrid::create(L, 64);
    const auto f = oracle::noise(g, rng);
    const double nyq = g->nyquist();

    for (double s : {0.0, 0.5, 1.0, 1.5, 2.0}) {
      const auto got = apply_multiplier(MultiplierSpec::fractional_laplacian(s), f);
      const auto want = oracle::apply(f, [&](double xi, bool) {
        return xi == 0.0 ? cplx(0.0) : cplx(std::pow(std::abs(xi), s));
      });
      CHECK(oracle::max_abs_diff(got, want) < 1e-10 * std::pow(nyq, s));
    }
    {
      const auto got = apply_multiplier(MultiplierSpec::hilbert(), f);
      const auto want = oracle::apply(f, [](double xi, bool nyquist) {
        if (nyquist || xi == 0.0) return cplx(0.0);
        return cplx(0.0, xi > 0 ? -1.0 : 1.0);
      });
      CHECK(oracle::max_abs_diff(got, want) < 1e-12);
    }
    {
      const auto got = apply_multiplier(MultiplierSpec::derivative(), f);
      const auto want = oracle::apply(f, [](double xi, bool nyquist) { return nyquist ? cplx(0.0) : cplx(0.0, xi); });
      CHECK(oracle::max_abs_diff(got, want) < 1e-10 * nyq);
    }
    {
      const auto got = apply_multiplier(MultiplierSpec::heat(0.05, 0.3), f);
      const auto want = oracle::apply(f, [](double xi, bool) { return cplx(std::exp(-0.05 * xi * xi * 0.3)); });
      CHECK(oracle::max_abs_diff(got, want) < 1e-12);
    }
    {
      const double n = 5.0;
      const auto lo = apply_multiplier(MultiplierSpec::lp_low(n), f);
      const auto hi = apply_multiplier(MultiplierSpec::lp_high(n), f);
      CHECK(oracle::max_abs_diff(lo, oracle::apply(f, [&](double xi, bool) { return cplx(std::abs(xi) < n ? 1.0 : 0.0); })) < 1e-12);
      CHECK(oracle::max_abs_diff(hi, oracle::apply(f, [&](double xi, bool) { return cplx(std::abs(xi) < n ? 0.0 : 1.0); })) < 1e-12);
    }
  }
}

TEST_CASE("operator identities on band-limited fields") {
  std::mt19937_64 rng(11);
  const auto g = SpectralGrid::create(16.0, 256);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = oracle::smooth(g, rng, 40);
    CHECK(compose_check(*g, f) < 1e-10);

    const auto q = MultiplierSpec::fractional_laplacian(0.5);
    const auto qq = apply_multiplier(q, apply_multiplier(q, f));
    const auto half = apply_multiplier(MultiplierSpec::fractional_laplacian(1.0), f);
    CHECK(l2_norm(qq - half) <= 1e-12 * l2_norm(half));

    // Laplacian = -fractional_laplacian(2) = derivative o derivative.
    const auto d = MultiplierSpec::derivative();
    const auto dd = apply_multiplier(d, apply_multiplier(d, f));
    const auto lap = apply_multiplier(MultiplierSpec::fractional_laplacian(2.0), f);
    CHECK(l2_norm(dd + lap) <= 1e-12 * l2_norm(lap));

    // Heat semigroup.
    const auto a = apply_multiplier(MultiplierSpec::heat(0.1, 0.2), apply_multiplier(MultiplierSpec::heat(0.1, 0.3), f));
    const auto b = apply_multiplier(MultiplierSpec::heat(0.1, 0.5), f);
    CHECK(l2_norm(a - b) <= 1e-13 * l2_norm(b));

    // Projections are idempotent and complementary.
    const auto lo = MultiplierSpec::lp_low(7.0);
    const auto p = apply_multiplier(lo, f);
    CHECK(l2_norm(apply_multiplier(lo, p) - p) <= 1e-14 * l2_norm(f));
    CHECK(l2_norm(p + apply_multiplier(MultiplierSpec::lp_high(7.0), f) - f) <= 1e-14 * l2_norm(f));
  }
}

TEST_CASE("edge cases: constants, heat at t = 0, Nyquist mode") {
  const auto g = SpectralGrid::create(16.0, 64);
  const VectorField3 c(g, Vec3{0.3, -1.0, 2.0});
  for (auto spec : {MultiplierSpec::fractional_laplacian(0.5), MultiplierSpec::hilbert(), MultiplierSpec::derivative()})
    CHECK(linf_norm(apply_multiplier(spec, c)) < 1e-14);
  // The zero mode has gain 0 for every s, including s = 0.
  CHECK(linf_norm(apply_multiplier(MultiplierSpec::fractional_laplacian(0.0), c)) < 1e-14);
  CHECK(hs_norm(c, 0.0) == doctest::Approx(l2_norm(c)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  const auto f = oracle::noise(g, rng);
  CHECK(oracle::max_abs_diff(apply_multiplier(MultiplierSpec::heat(1.0, 0.0), f), f) < 1e-13);

  // Pure Nyquist mode (-1)^j: odd multipliers annihilate it, |xi|^s scales it.
  std::array<std::vector<double>, 3> alt;
  for (auto& v : alt) {
    v.resize(64);
    for (std::size_t j = 0; j < 64; ++j) v[j] = (j % 2 ? -1.0 : 1.0);
  }
  const VectorField3 nq(g, alt);
  CHECK(linf_norm(apply_multiplier(MultiplierSpec::hilbert(), nq)) < 1e-13);
  CHECK(linf_norm(apply_multiplier(MultiplierSpec::derivative(), nq)) < 1e-12);
  const auto half = apply_multiplier(MultiplierSpec::fractional_laplacian(1.0), nq);
  CHECK(half.component(0)[0] == doctest::Approx(g->nyquist()));
}

TEST_CASE("multiplier domain errors") {
  const auto g = SpectralGrid::create(16.0, 64);
  const VectorField3 f(g, Vec3{0, 0, 1});
  expect_code(ErrorCode::domain, [&] { apply_multiplier(MultiplierSpec::fractional_laplacian(-0.5), f); });
  expect_code(ErrorCode::domain, [&] { apply_multiplier(MultiplierSpec::fractional_laplacian(2.5), f); });
  expect_code(ErrorCode::domain, [&] { apply_multiplier(MultiplierSpec::heat(0.0, 1.0), f); });
  expect_code(ErrorCode::domain, [&] { apply_multiplier(MultiplierSpec::heat(1.0, -1.0), f); });
  expect_code(ErrorCode::domain, [&] { apply_multiplier(MultiplierSpec::lp_low(0.0), f); });
  expect_code(ErrorCode::domain, [&] { apply_multiplier(MultiplierSpec::lp_high(g->nyquist() * 1.01), f); });
  const auto other = SpectralGrid::create(16.0, 32);
  expect_code(ErrorCode::dimension, [&] { apply_multiplier(*other, MultiplierSpec::hilbert(), f); });
}
