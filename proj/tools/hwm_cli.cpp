// hwm: command-line front end. Physics parameters come from the config file;
// flags only pick the subcommand, the config and the output directory.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "hwm/hwm.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int exit_for(hwm_status st) {
  switch (st) {
    case HWM_OK: return kExitPass;
    case HWM_ERR_CONFIG:
    case HWM_ERR_INVALID_ARGUMENT:
    case HWM_ERR_IO:
    case HWM_ERR_FORMAT: return kExitUsage;
    default: return kExitFail;
  }
}

int report(hwm_status st, const hwm_verdict& v) {
  if (st != HWM_OK) {
    std::fprintf(stderr, "hwm: %s error: %s\n", hwm_status_string(st), hwm_last_error());
    return exit_for(st);
  }
  for (std::size_t i = 0; const char* line = hwm_verdict_detail(i); ++i) std::fprintf(stderr, "  %s\n", line);
  std::fprintf(stderr, "%s\n", v.summary);
  return v.passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic half-wave maps: simulation and verification tool"};
  app.set_version_flag("--version", std::string(hwm_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", trajectory;
  std::uint64_t seed = 0;
  auto with_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
  };
  auto* simulate = app.add_subcommand("simulate", "Evolve the data and write diagnostics");
  auto* picard = app.add_subcommand("picard-check", "Local Picard iteration and contraction report");
  auto* sweep = app.add_subcommand("sweep", "Viscosity ladder and limit certificate");
  auto* weakres = app.add_subcommand("weakres", "Weak-form residuals of a stored trajectory");
  auto* lpsplit = app.add_subcommand("lp-split", "Frequency tails and commutator tables");
  auto* selftest = app.add_subcommand("selftest", "Operator property suite");
  for (auto* sub : {simulate, picard, sweep, weakres, lpsplit}) with_config(sub);
  weakres->add_option("-t,--trajectory", trajectory, "Trajectory file from simulate")->required()->check(CLI::ExistingFile);
  selftest->add_option("--seed", seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    std::fprintf(stderr, "%s", app.help().c_str());
    return kExitUsage;
  }

  hwm_verdict verdict{};
  if (selftest->parsed()) return report(hwm_run_selftest(seed, &verdict), verdict);

  hwm_config* cfg = nullptr;
  if (hwm_status st = hwm_config_load(config_path.c_str(), &cfg); st != HWM_OK) {
    std::fprintf(stderr, "hwm: %s\n", hwm_last_error());
    return kExitUsage;
  }
  hwm_status st = HWM_OK;
  if (simulate->parsed()) st = hwm_run_simulate(cfg, out_dir.c_str(), &verdict);
  else if (picard->parsed()) st = hwm_run_picard_check(cfg, out_dir.c_str(), &verdict);
  else if (sweep->parsed()) st = hwm_run_sweep(cfg, out_dir.c_str(), &verdict);
  else if (weakres->parsed()) st = hwm_run_weakres(cfg, trajectory.c_str(), out_dir.c_str(), &verdict);
  else if (lpsplit->parsed()) st = hwm_run_lp_split(cfg, out_dir.c_str(), &verdict);
  hwm_config_destroy(cfg);
  return report(st, verdict);
}
