#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hwm/config.hpp"

namespace hwm {

/// Outcome of one subcommand: passed selects exit code 0 or 1.
struct AppVerdict {
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;
};

// Each command writes its data files and a manifest.json into out_dir,
// creating it if needed. Errors propagate as hwm::Error.
AppVerdict run_simulate(const RunConfig& cfg, const std::string& out_dir);
AppVerdict run_picard_check(const RunConfig& cfg, const std::string& out_dir);
AppVerdict run_sweep(const RunConfig& cfg, const std::string& out_dir);
AppVerdict run_weakres(const RunConfig& cfg, const std::string& trajectory_path,
                       const std::string& out_dir);
AppVerdict run_lp_split(const RunConfig& cfg, const std::string& out_dir);

/// Operator property suite on random band-limited fields; needs no config.
AppVerdict run_selftest(std::uint64_t seed);

/// Version string compiled into the library.
const char* version_string();

}  // namespace hwm
