// Exercises the shared library through its C header only.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "hwm/hwm.h"

namespace fs = std::filesystem;

namespace {

const char* kConfig = R"([grid]
box_length = 16
num_points = 1024
[data]
family = geodesic_bump
[solver]
eps = 0.05
final_time = 0.05
dt = 1e-3
output_stride = 10
[picard]
window = 0.01
)";

struct Handles {
  hwm_grid* grid = nullptr;
  std::vector<hwm_field*> fields;
  hwm_config* cfg = nullptr;
  ~Handles() {
    for (auto* f : fields) hwm_field_destroy(f);
    hwm_grid_destroy(grid);
    hwm_config_destroy(cfg);
  }
};

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(hwm_version()) > 0);
  CHECK(std::string(hwm_status_string(HWM_OK)) != hwm_status_string(HWM_ERR_CONFIG));
}

TEST_CASE("grid and field handles") {
  Handles h;
  REQUIRE(hwm_grid_create(16.0, 64, &h.grid) == HWM_OK);
  std::vector<double> x(64);
  REQUIRE(hwm_grid_coordinates(h.grid, x.data(), x.size()) == HWM_OK);
  CHECK(x[0] == -8.0);
  CHECK(x[1] == doctest::Approx(-7.75));
  CHECK(hwm_grid_coordinates(h.grid, x.data(), 10) == HWM_ERR_DIMENSION);

  hwm_grid* bad = nullptr;
  CHECK(hwm_grid_create(16.0, 63, &bad) != HWM_OK);
  CHECK(bad == nullptr);
  CHECK(std::strlen(hwm_last_error()) > 0);

  // u = cos(xi x) e_x with xi = 2 pi 3 / 16.
  const double xi = 2 * M_PI * 3 / 16.0;
  std::vector<double> ux(64), zero(64, 0.0);
  for (int j = 0; j < 64; ++j) ux[j] = std::cos(xi * x[j]);
  hwm_field* u = nullptr;
  REQUIRE(hwm_field_create(h.grid, ux.data(), zero.data(), zero.data(), &u) == HWM_OK);
  h.fields.push_back(u);
  CHECK(hwm_field_size(u) == 64);

  hwm_multiplier m{HWM_DERIVATIVE, 0, 0, 0, 0};
  hwm_field* du = nullptr;
  REQUIRE(hwm_apply_multiplier(&m, u, &du) == HWM_OK);
  h.fields.push_back(du);
  std::vector<double> a(64), b(64), c(64);
  REQUIRE(hwm_field_copy_out(du, a.data(), b.data(), c.data(), 64) == HWM_OK);
  for (int j = 0; j < 64; ++j) CHECK(a[j] == doctest::Approx(-xi * std::sin(xi * x[j])).epsilon(1e-12));

  double n = 0.0;
  REQUIRE(hwm_hs_norm(u, 1.0, &n) == HWM_OK);
  CHECK(n == doctest::Approx(xi * std::sqrt(8.0)).epsilon(1e-12));  // |xi| * ||cos||_{L2}
  CHECK(hwm_hs_norm(u, -1.0, &n) == HWM_ERR_DOMAIN);

  hwm_field* nl = nullptr;
  REQUIRE(hwm_nonlinearity(u, 1, &nl) == HWM_OK);  // one direction: zero
  h.fields.push_back(nl);
  REQUIRE(hwm_field_copy_out(nl, a.data(), b.data(), c.data(), 64) == HWM_OK);
  for (int j = 0; j < 64; ++j) CHECK(std::abs(a[j]) + std::abs(b[j]) + std::abs(c[j]) < 1e-13);

  CHECK(hwm_apply_multiplier(nullptr, u, &du) == HWM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("snapshot through the C API") {
  Handles h;
  REQUIRE(hwm_grid_create(16.0, 32, &h.grid) == HWM_OK);
  std::vector<double> ux(32, 0.0), uy(32, 0.0), uz(32, 1.0);
  hwm_field* u = nullptr;
  REQUIRE(hwm_field_create(h.grid, ux.data(), uy.data(), uz.data(), &u) == HWM_OK);
  h.fields.push_back(u);
  const auto p = (fs::temp_directory_path() / "hwm_capi_test.snap").string();
  REQUIRE(hwm_snapshot_write(u, p.c_str()) == HWM_OK);
  hwm_field* v = nullptr;
  REQUIRE(hwm_snapshot_read(p.c_str(), &v) == HWM_OK);
  h.fields.push_back(v);
  CHECK(hwm_field_size(v) == 32);
  fs::remove(p);
  CHECK(hwm_snapshot_read(p.c_str(), &v) == HWM_ERR_IO);
}

TEST_CASE("config and commands") {
  Handles h;
  CHECK(hwm_config_parse("[grid]\nbox_length = 16\n", &h.cfg) == HWM_ERR_CONFIG);
  CHECK(std::string(hwm_last_error()).find("num_points") != std::string::npos);
  REQUIRE(hwm_config_parse(kConfig, &h.cfg) == HWM_OK);

  size_t need = 0;
  char small[8];
  CHECK(hwm_config_serialize(h.cfg, small, sizeof small, &need) == HWM_OK);
  CHECK(need > sizeof small);
  CHECK(std::strlen(small) == sizeof small - 1);
  std::vector<char> buf(need);
  REQUIRE(hwm_config_serialize(h.cfg, buf.data(), buf.size(), &need) == HWM_OK);
  hwm_config* again = nullptr;
  REQUIRE(hwm_config_parse(buf.data(), &again) == HWM_OK);
  hwm_config_destroy(again);

  const auto out = fs::temp_directory_path() / "hwm_capi_sim";
  fs::remove_all(out);
  hwm_verdict v{};
  REQUIRE(hwm_run_simulate(h.cfg, out.string().c_str(), &v) == HWM_OK);
  CHECK(v.passed == 1);
  CHECK(std::strlen(v.summary) > 0);
  CHECK(hwm_verdict_detail(0) != nullptr);
  CHECK(hwm_verdict_detail(100000) == nullptr);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "trajectory.hwt"));

  const auto wr = fs::temp_directory_path() / "hwm_capi_weak";
  CHECK(hwm_run_weakres(h.cfg, "/nonexistent.hwt", wr.string().c_str(), &v) == HWM_ERR_IO);
  fs::remove_all(out);
  fs::remove_all(wr);

  REQUIRE(hwm_run_selftest(7, &v) == HWM_OK);
  CHECK(v.passed == 1);
}
