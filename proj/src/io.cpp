#include "hwm/io.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

#include "hwm/error.hpp"
#include "hwm/grid.hpp"

namespace hwm {

namespace {

constexpr char kSnapshotMagic[4] = {'H', 'W', 'M', '1'};
constexpr char kTrajectoryMagic[4] = {'H', 'W', 'T', '1'};

template <class T>
void put(std::string& buf, T v) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(v);
  for (std::size_t i = 0; i < sizeof(U); ++i) buf.push_back(char((bits >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  template <class T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    need(sizeof(U));
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
      bits |= U(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }

  void magic(const char (&m)[4]) {
    need(4);
    if (std::memcmp(data_.data() + pos_, m, 4) != 0)
      fail(ErrorCode::format, path_ + ": bad magic bytes");
    pos_ += 4;
  }

  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) fail(ErrorCode::format, path_ + ": truncated file");
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  std::string data_;
  std::string path_;
  std::size_t pos_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

void put_payload(std::string& buf, const VectorField3& f) {
  for (int c = 0; c < 3; ++c)
    for (double v : f.component(c)) put(buf, v);
}

VectorField3 get_payload(Reader& r, const GridPtr& grid) {
  const std::size_t m = grid->size();
  r.need(3 * m * 8);
  std::array<std::vector<double>, 3> comp;
  for (int c = 0; c < 3; ++c) {
    comp[c].resize(m);
    for (auto& v : comp[c]) v = r.get<double>();
  }
  return VectorField3(grid, std::move(comp));
}

GridPtr checked_grid(std::uint64_t m, double L, const std::string& path) {
  try {
    return SpectralGrid::create(L, std::size_t(m));
  } catch (const Error& e) {
    fail(ErrorCode::format, path + ": invalid grid header (" + e.what() + ")");
  }
}

std::string hex(const unsigned char* d, unsigned n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < n; ++i) {
    out.push_back(digits[d[i] >> 4]);
    out.push_back(digits[d[i] & 15]);
  }
  return out;
}

std::string sha256_bytes(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    fail(ErrorCode::internal, "SHA-256 failed");
  return hex(md, len);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::size_t snapshot_bytes(std::size_t num_points) { return 4 + 4 + 8 + 8 + 3 * num_points * 8; }

void write_snapshot(const VectorField3& field, const std::string& path) {
  std::string buf(kSnapshotMagic, 4);
  buf.reserve(snapshot_bytes(field.size()));
  put(buf, kSnapshotVersion);
  put(buf, std::uint64_t(field.size()));
  put(buf, field.grid().box_length());
  put_payload(buf, field);
  dump(path, buf);
}

VectorField3 read_snapshot(const std::string& path) {
  Reader r(slurp(path), path);
  r.magic(kSnapshotMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion)
    fail(ErrorCode::format, path + ": snapshot version " + std::to_string(version) + " not supported");
  const auto m = r.get<std::uint64_t>();
  const double L = r.get<double>();
  const GridPtr grid = checked_grid(m, L, path);
  VectorField3 f = get_payload(r, grid);
  if (!r.at_end()) fail(ErrorCode::format, path + ": trailing bytes after snapshot");
  return f;
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
  traj.validate();
  const auto& cfg = traj.config;
  std::string buf(kTrajectoryMagic, 4);
  put(buf, kTrajectoryVersion);
  put(buf, std::uint64_t(traj.grid()->size()));
  put(buf, traj.grid()->box_length());
  put(buf, cfg.eps);
  put(buf, cfg.dt);
  put(buf, std::uint32_t(cfg.output_stride));
  const std::uint32_t flags = (cfg.project_to_sphere ? 1u : 0u) | (cfg.dealias ? 2u : 0u) |
                              (std::uint32_t(cfg.integrator) << 8);
  put(buf, flags);
  put(buf, std::uint64_t(traj.size()));
  for (double t : traj.times) put(buf, t);
  for (const auto& u : traj.slices) put_payload(buf, u);
  dump(path, buf);
}

Trajectory read_trajectory(const std::string& path) {
  Reader r(slurp(path), path);
  r.magic(kTrajectoryMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kTrajectoryVersion)
    fail(ErrorCode::format, path + ": trajectory version " + std::to_string(version) + " not supported");
  const auto m = r.get<std::uint64_t>();
  const double L = r.get<double>();
  Trajectory traj;
  auto& cfg = traj.config;
  cfg.num_points = std::size_t(m);
  cfg.box_length = L;
  cfg.eps = r.get<double>();
  cfg.dt = r.get<double>();
  cfg.output_stride = int(r.get<std::uint32_t>());
  const auto flags = r.get<std::uint32_t>();
  cfg.project_to_sphere = flags & 1u;
  cfg.dealias = flags & 2u;
  const auto integ = (flags >> 8) & 0xffu;
  if (integ > 1) fail(ErrorCode::format, path + ": unknown integrator id");
  cfg.integrator = Integrator(integ);
  const auto n = r.get<std::uint64_t>();
  if (n == 0) fail(ErrorCode::format, path + ": empty trajectory");
  r.need(n * 8);
  for (std::uint64_t j = 0; j < n; ++j) traj.times.push_back(r.get<double>());
  const GridPtr grid = checked_grid(m, L, path);
  for (std::uint64_t j = 0; j < n; ++j) traj.slices.push_back(get_payload(r, grid));
  if (!r.at_end()) fail(ErrorCode::format, path + ": trailing bytes after trajectory");
  cfg.final_time = traj.times.back();
  traj.validate();
  return traj;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  for (double v : values) row.push_back(format_number(v));
  rows.push_back(std::move(row));
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out += (i ? "," : "") + csv_escape(table.header[i]);
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      fail(ErrorCode::internal, "CSV row width does not match the header of " + path);
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(row[i]);
    out += "\n";
  }
  dump(path, out);
}

std::string sha256_file(const std::string& path) { return sha256_bytes(slurp(path)); }
std::string sha256_text(const std::string& text) { return sha256_bytes(text); }

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_file(RunManifest& manifest, const std::string& dir, const std::string& name) {
  const auto path = std::filesystem::path(dir) / name;
  manifest.files.push_back({name, std::filesystem::file_size(path), sha256_file(path.string())});
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["version"] = m.version;
  j["started_utc"] = m.started_utc;
  j["finished_utc"] = m.finished_utc;
  j["config"] = m.config_echo;
  auto& tol = j["tolerances"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.tolerances) tol[k] = v;
  j["verdict"] = {{"passed", m.passed}, {"summary", m.summary}, {"details", m.details}};
  std::string inventory;
  auto files = nlohmann::ordered_json::array();
  for (const auto& f : m.files) {
    files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    inventory += f.name + ":" + f.sha256 + "\n";
  }
  j["files"] = files;
  j["inventory_sha256"] = sha256_bytes(inventory);
  dump(path, j.dump(2) + "\n");
}

}  // namespace hwm
