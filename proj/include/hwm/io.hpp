#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hwm/field.hpp"
#include "hwm/trajectory.hpp"

namespace hwm {

// Snapshot: "HWM1", u32 version, u64 M, f64 L, 3M f64, all little-endian,
// component-major.
inline constexpr std::uint32_t kSnapshotVersion = 1;
void write_snapshot(const VectorField3& field, const std::string& path);
/// Throws ErrorCode::format on bad magic, version mismatch or truncation.
VectorField3 read_snapshot(const std::string& path);
std::size_t snapshot_bytes(std::size_t num_points);

// Trajectory: "HWT1", u32 version, u64 M, f64 L, f64 eps, f64 dt,
// u32 stride, u32 flags, u64 n, f64 times[n], n snapshots' payloads.
inline constexpr std::uint32_t kTrajectoryVersion = 1;
void write_trajectory(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory(const std::string& path);

/// Numeric CSV with a header row; cells written with 17 significant digits.
struct CsvTable {
  std::vector<std::string> header;  // "name [unit]"
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
};
std::string format_number(double v);
void write_csv(const CsvTable& table, const std::string& path);

std::string sha256_file(const std::string& path);
std::string sha256_text(const std::string& text);

struct ManifestFile {
  std::string name;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::string config_echo;
  std::string version;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::pair<std::string, double>> tolerances;
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;  // one line per verdict component
  std::vector<ManifestFile> files;
};

std::string utc_now();
/// Adds name, size and checksum of an emitted file living in dir.
void add_file(RunManifest& manifest, const std::string& dir, const std::string& name);
/// Writes manifest.json with an inventory checksum over the listed files.
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace hwm
