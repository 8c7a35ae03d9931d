#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

#include "hwm/app.hpp"
#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/grid.hpp"
#include "hwm/io.hpp"
#include "hwm/solver.hpp"
#include "hwm/spectral.hpp"

namespace hwm {

namespace {

// Random real field with modes |k| <= band, zero mean when requested.
VectorField3 random_field(const GridPtr& grid, std::mt19937_64& rng, std::size_t band, bool zero_mean) {
  std::normal_distribution<double> n01;
  SpectralField c;
  for (auto& comp : c) {
    comp.assign(grid->spectral_size(), Complex{});
    for (std::size_t k = 0; k <= band; ++k) comp[k] = {n01(rng), k == 0 ? 0.0 : n01(rng)};
    if (zero_mean) comp[0] = {};
  }
  return to_physical(grid, c);
}

double rel(const VectorField3& a, const VectorField3& b) {
  return l2_norm(a - b) / std::max(1e-30, l2_norm(b));
}

struct Suite {
  AppVerdict v{true, {}, {}};
  void record(const std::string& name, double value, double tol) {
    std::ostringstream os;
    os << (value <= tol ? "PASS " : "FAIL ") << name << ": " << value << " (tolerance " << tol << ")";
    v.details.push_back(os.str());
    if (!(value <= tol)) v.passed = false;
  }
};

}  // namespace

AppVerdict run_selftest(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const GridPtr grid = SpectralGrid::create(2.0 * M_PI, 256);
  const std::size_t band = grid->size() / 4 - 1;
  Suite s;
  double compose = 0, quarter = 0, planch = 0, semigroup = 0, lp = 0, hilbert2 = 0, ortho = 0, alias = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const VectorField3 f = random_field(grid, rng, band, false);
    const VectorField3 z = random_field(grid, rng, band, true);
    compose = std::max(compose, compose_check(*grid, f));

    const auto q = MultiplierSpec::fractional_laplacian(0.5);
    quarter = std::max(quarter, rel(apply_multiplier(q, apply_multiplier(q, f)),
                                    apply_multiplier(MultiplierSpec::fractional_laplacian(1.0), f)));
    planch = std::max(planch, std::abs(hs_norm(f, 0.0) - l2_norm(f)) / l2_norm(f));

    const auto h1 = MultiplierSpec::heat(0.3, 0.2), h2 = MultiplierSpec::heat(0.3, 0.5);
    semigroup = std::max(semigroup, rel(apply_multiplier(h1, apply_multiplier(h2, f)),
                                        apply_multiplier(MultiplierSpec::heat(0.3, 0.7), f)));
    lp = std::max(lp, rel(apply_multiplier(MultiplierSpec::lp_low(17.0), f) +
                              apply_multiplier(MultiplierSpec::lp_high(17.0), f), f));
    const auto H = MultiplierSpec::hilbert();
    hilbert2 = std::max(hilbert2, rel(apply_multiplier(H, apply_multiplier(H, z)), -1.0 * z));

    const VectorField3 nu = nonlinearity(f);
    const auto d = dot(f, nu);
    double dmax = 0.0;
    for (double x : d) dmax = std::max(dmax, std::abs(x));
    ortho = std::max(ortho, dmax / (1.0 + linf_norm(f) * linf_norm(nu)));

    alias = std::max(alias, rel(cross(f, z, true), cross(f, z, false)));
  }
  s.record("hilbert o derivative = half Laplacian", compose, 1e-10);
  s.record("quarter o quarter = half Laplacian", quarter, 1e-12);
  s.record("Plancherel", planch, 1e-12);
  s.record("heat semigroup", semigroup, 1e-12);
  s.record("low + high projection = identity", lp, 1e-13);
  s.record("hilbert o hilbert = -identity on zero-mean fields", hilbert2, 1e-12);
  s.record("u . N(u) = 0 pointwise", ortho, 1e-12);
  s.record("dealiased product agrees below 2/3 band", alias, 1e-12);

  // Persistence round trips in a scratch directory.
  const auto dir = std::filesystem::temp_directory_path() /
                   ("hwm_selftest_" + std::to_string(seed) + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const VectorField3 f = random_field(grid, rng, band, false);
  const auto snap = (dir / "f.snap").string();
  write_snapshot(f, snap);
  const VectorField3 g = read_snapshot(snap);
  bool same = g.size() == f.size() && g.grid().box_length() == f.grid().box_length();
  for (int c = 0; c < 3 && same; ++c)
    same = std::equal(f.component(c).begin(), f.component(c).end(), g.component(c).begin());
  s.record("snapshot round trip (mismatches)", same ? 0.0 : 1.0, 0.0);

  RunConfig cfg;
  cfg.solver.box_length = 16.0;
  cfg.solver.num_points = 512;
  cfg.solver.eps = 0.1;
  cfg.solver.dt = 1e-3;
  const RunConfig back = parse_config_text(serialize_config(cfg));
  s.record("config round trip (mismatches)", back == cfg ? 0.0 : 1.0, 0.0);
  std::filesystem::remove_all(dir);

  s.v.summary = std::string(s.v.passed ? "selftest passed" : "selftest failed") + " (" +
                std::to_string(s.v.details.size()) + " checks)";
  return s.v;
}

}  // namespace hwm
