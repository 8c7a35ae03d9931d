#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hwm/config.hpp"
#include "hwm/error.hpp"
#include "hwm/initial_data.hpp"
#include "hwm/io.hpp"
#include "hwm/solver.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace hwm;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(; smallest accepted file
[grid]
box_length = 16
num_points = 512

[data]
family = geodesic_bump

[solver]
eps = 0.05
final_time = 0.1
)";

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hwm_io_" + std::to_string(std::random_device{}()) + "_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& n) const { return (path / n).string(); }
};

std::string error_text(auto&& fn, ErrorCode& code) {
  try {
    fn();
  } catch (const Error& e) {
    code = e.code();
    return e.what();
  }
  code = ErrorCode::internal;
  return {};
}

std::string read_all(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::string& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const auto c = parse_config_text(kMinimal);
  CHECK(c.solver.box_length == 16.0);
  CHECK(c.solver.num_points == 512);
  CHECK(c.solver.eps == 0.05);
  CHECK(c.data.family == DataFamily::geodesic_bump);
  CHECK(c.sweep.eps_ladder.size() == 4);
  CHECK_NOTHROW(c.validate());
  const auto plan = c.sweep_plan();
  REQUIRE(plan.windows.size() == 3);
  CHECK(plan.windows[0].half_width == doctest::Approx(2.0));
  CHECK(plan.windows[2].half_width == doctest::Approx(8.0));
}

TEST_CASE("config errors name the key and line") {
  ErrorCode code;
  std::string text = kMinimal;
  text.replace(text.find("eps = 0.05"), 10, "eps = -1");
  auto msg = error_text([&] { parse_config_text(text, "bad.ini"); }, code);
  CHECK(code == ErrorCode::config);
  CHECK(msg.find("solver.eps") != std::string::npos);

  msg = error_text([&] { parse_config_text(std::string(kMinimal) + "colour = red\n", "bad.ini"); }, code);
  CHECK(code == ErrorCode::config);
  CHECK(msg.find("colour") != std::string::npos);
  CHECK(msg.find("bad.ini:12") != std::string::npos);

  msg = error_text([&] { parse_config_text(std::string(kMinimal) + "[physics]\n"); }, code);
  CHECK(code == ErrorCode::config);
  CHECK(msg.find("physics") != std::string::npos);

  text = kMinimal;
  text.erase(text.find("num_points = 512"), 16);
  msg = error_text([&] { parse_config_text(text); }, code);
  CHECK(code == ErrorCode::config);
  CHECK(msg.find("grid.num_points") != std::string::npos);

  text = kMinimal;
  text.replace(text.find("eps = 0.05"), 10, "eps = 0.05x");
  error_text([&] { parse_config_text(text); }, code);
  CHECK(code == ErrorCode::config);

  msg = error_text([&] { parse_config_text("[grid\nbox_length = 1\n", "syn.ini"); }, code);
  CHECK(code == ErrorCode::config);
  CHECK(msg.find("syn.ini:1") != std::string::npos);

  error_text([] { parse_config("/nonexistent/dir/x.ini"); }, code);
  CHECK(code == ErrorCode::io);
}

TEST_CASE("config round trip") {
  auto c = parse_config_text(kMinimal);
  c.solver.dt = 2.5e-4;
  c.solver.integrator = Integrator::ifrk4;
  c.solver.output_stride = 4;
  c.data.family = DataFamily::twist_bump;
  c.data.far_field = {0.6, 0.0, 0.8};
  c.data.amplitude = 0.1 + 0.2;  // not exactly representable in short form
  c.sweep.eps_ladder = {0.2, 0.1, 0.05, 0.025, 0.0125};
  c.sweep.window_times = {0.5, 1.0};
  c.sweep.window_half_widths = {3.0, 7.0};
  c.seed = 1234567890123ull;
  c.name = "trip";
  const auto text = serialize_config(c);
  const auto back = parse_config_text(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("snapshot format") {
  TempDir dir;
  std::mt19937_64 rng(3);
  const auto g = SpectralGrid::create(16.0, 1024);
  const auto u = oracle::noise(g, rng);
  const auto p = dir / "u.snap";
  write_snapshot(u, p);
  CHECK(fs::file_size(p) == 24600);
  CHECK(snapshot_bytes(1024) == 24600);
  const auto v = read_snapshot(p);
  CHECK(v.grid().size() == 1024);
  CHECK(v.grid().box_length() == 16.0);
  CHECK(oracle::max_abs_diff(u, v) == 0.0);

  const auto bytes = read_all(p);
  CHECK(bytes.substr(0, 4) == "HWM1");
  ErrorCode code;
  write_all(dir / "t.snap", bytes.substr(0, bytes.size() - 8));
  error_text([&] { read_snapshot(dir / "t.snap"); }, code);
  CHECK(code == ErrorCode::format);
  auto bad = bytes;
  bad[0] = 'X';
  write_all(dir / "m.snap", bad);
  error_text([&] { read_snapshot(dir / "m.snap"); }, code);
  CHECK(code == ErrorCode::format);
  bad = bytes;
  bad[4] = 2;  // version field, little-endian
  write_all(dir / "v.snap", bad);
  error_text([&] { read_snapshot(dir / "v.snap"); }, code);
  CHECK(code == ErrorCode::format);
  write_all(dir / "x.snap", bytes + "z");
  error_text([&] { read_snapshot(dir / "x.snap"); }, code);
  CHECK(code == ErrorCode::format);
  error_text([&] { read_snapshot(dir / "missing.snap"); }, code);
  CHECK(code == ErrorCode::io);
}

TEST_CASE("trajectory round trip") {
  TempDir dir;
  SolverConfig c;
  c.eps = 0.05;
  c.final_time = 0.02;
  c.dt = 1e-3;
  c.output_stride = 5;
  c.num_points = 128;
  c.integrator = Integrator::ifrk4;
  c.project_to_sphere = true;
  c.picard.window = 0.02;
  const auto traj = evolve(make_initial(SpectralGrid::create(16.0, 128), {}), c);
  write_trajectory(traj, dir / "t.hwt");
  const auto back = read_trajectory(dir / "t.hwt");
  CHECK(back.times == traj.times);
  CHECK(back.config.eps == c.eps);
  CHECK(back.config.dt == c.dt);
  CHECK(back.config.output_stride == 5);
  CHECK(back.config.integrator == Integrator::ifrk4);
  CHECK(back.config.project_to_sphere);
  REQUIRE(back.size() == traj.size());
  for (std::size_t j = 0; j < traj.size(); ++j) CHECK(oracle::max_abs_diff(back.slices[j], traj.slices[j]) == 0.0);
}

TEST_CASE("csv output") {
  TempDir dir;
  CsvTable t;
  t.header = {"t [1]", "note"};
  t.add_row({0.1, 1.0 / 3.0});
  t.rows.push_back({"2", "a,b"});
  write_csv(t, dir / "x.csv");
  std::istringstream in(read_all(dir / "x.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t [1],note");
  std::getline(in, line);
  CHECK(line == "0.10000000000000001,0.33333333333333331");
  std::getline(in, line);
  CHECK(line == "2,\"a,b\"");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
}

TEST_CASE("checksums and manifest") {
  CHECK(sha256_text("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  TempDir dir;
  write_all(dir / "a.txt", "abc");
  CHECK(sha256_file(dir / "a.txt") == sha256_text("abc"));
  RunManifest m;
  m.command = "simulate";
  m.version = "0.1.0";
  m.started_utc = m.finished_utc = utc_now();
  m.tolerances = {{"max_principle", 1e-6}};
  m.passed = true;
  m.summary = "ok";
  add_file(m, dir.path.string(), "a.txt");
  REQUIRE(m.files.size() == 1);
  CHECK(m.files[0].bytes == 3);
  write_manifest(m, dir / "manifest.json");
  const auto j = nlohmann::json::parse(read_all(dir / "manifest.json"));
  CHECK(j["command"] == "simulate");
  CHECK(j["verdict"]["passed"] == true);
  CHECK(j["files"][0]["sha256"] == sha256_text("abc"));
  CHECK(j["inventory_sha256"] == sha256_text("a.txt:" + sha256_text("abc") + "\n"));
  CHECK(m.started_utc.size() == 20);  // YYYY-MM-DDTHH:MM:SSZ
}
