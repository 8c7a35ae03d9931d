#include "hwm/app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include "hwm/diagnostics.hpp"
#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/grid.hpp"
#include "hwm/initial_data.hpp"
#include "hwm/io.hpp"
#include "hwm/solver.hpp"
#include "hwm/spectral.hpp"
#include "hwm/sweep.hpp"
#include "hwm/weak_form.hpp"

namespace hwm {

const char* version_string() { return HWM_VERSION_STRING; }

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void prepare(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::io, "cannot create output directory " + dir);
}

RunManifest begin(const std::string& command, const RunConfig& cfg) {
  RunManifest m;
  m.command = command;
  m.version = version_string();
  m.started_utc = utc_now();
  m.config_echo = serialize_config(cfg);
  return m;
}

void finish(RunManifest& m, const AppVerdict& v, const std::string& dir) {
  m.finished_utc = utc_now();
  m.passed = v.passed;
  m.summary = v.summary;
  m.details = v.details;
  write_manifest(m, path_in(dir, "manifest.json"));
}

void check(AppVerdict& v, bool ok, const std::string& line) {
  v.details.push_back(std::string(ok ? "PASS " : "FAIL ") + line);
  if (!ok) v.passed = false;
}

std::string tail_header(double n) {
  std::ostringstream os;
  os << n;
  return os.str();
}

// Largest fitted slope of commutator_norm(P_{>=N} u, psi) over the battery's
// spatial profiles, with points at round-off level dropped.
double commutator_slope(const VectorField3& u, const std::vector<double>& cutoffs,
                        const std::vector<VectorField3>& profiles, CsvTable* table,
                        const std::string& label) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    std::vector<double> x, y;
    for (double n : cutoffs) {
      const VectorField3 high = apply_multiplier(MultiplierSpec::lp_high(n), u);
      const double c = commutator_norm(high, profiles[p]);
      if (table) table->rows.push_back({label, std::to_string(p), format_number(n), format_number(c)});
      if (c > 1e-13) {
        x.push_back(n);
        y.push_back(c);
      }
    }
    if (x.size() >= 2) worst = std::max(worst, loglog_slope(x, y));
  }
  return worst;
}

std::vector<VectorField3> battery_profiles(const GridPtr& grid, double horizon) {
  std::vector<VectorField3> out;
  const auto battery = canonical_battery(grid->box_length(), horizon);
  for (const auto& phi : battery) {
    if (phi.time.center != battery.front().time.center) continue;
    out.push_back(phi.psi(grid));
  }
  return out;
}

}  // namespace

AppVerdict run_simulate(const RunConfig& cfg, const std::string& dir) {
  cfg.validate();
  prepare(dir);
  RunManifest m = begin("simulate", cfg);
  const auto& sc = cfg.solver;
  const GridPtr grid = SpectralGrid::create(sc.box_length, sc.num_points);
  const VectorField3 u0 = make_initial(grid, cfg.data);
  const AdmissibilityReport adm = verify_admissibility(u0, cfg.data);
  const Trajectory traj = evolve(u0, sc);

  write_snapshot(u0, path_in(dir, "u0.snap"));
  write_snapshot(traj.slices.back(), path_in(dir, "final.snap"));
  write_trajectory(traj, path_in(dir, "trajectory.hwt"));

  SeriesOptions so;
  so.far_field = cfg.data.far_field;
  so.center = cfg.data.center;
  so.far_radius = cfg.diagnostics.far_field_radius;
  so.tail_cutoffs = cfg.diagnostics.tail_cutoffs;
  const DiagnosticsSeries s = compute_series(traj, so);
  CsvTable series;
  series.header = {"t [time]", "E_h1 [energy]", "E_c [energy]", "sphere_dev [1]", "far_field [1]"};
  for (double n : so.tail_cutoffs) series.header.push_back("tail_N" + tail_header(n) + " [L2]");
  for (std::size_t j = 0; j < s.times.size(); ++j) {
    std::vector<double> row{s.times[j], s.e_h1[j], s.e_c[j], s.sphere_dev[j], s.far_field[j]};
    for (const auto& t : s.tail) row.push_back(t[j]);
    series.add_row(row);
  }
  write_csv(series, path_in(dir, "series.csv"));

  if (traj.size() >= 3) {
    const auto en = energy_identity_residual(traj);
    const auto ec = critical_energy_identity_residual(traj);
    const auto cv = constraint_equation_residual(traj);
    CsvTable id;
    id.header = {"t [time]", "energy_identity [rel]", "critical_identity [rel]", "v_equation [rel]"};
    for (std::size_t j = 0; j < en.size(); ++j) id.add_row({traj.times[j + 1], en[j], ec[j], cv[j]});
    write_csv(id, path_in(dir, "identities.csv"));
  }

  AppVerdict v;
  v.passed = true;
  check(v, adm.passed(), "admissible data: sphere " + num(adm.sphere_deviation) + ", far field " +
                             num(adm.far_field_residue) + ", decay " + num(adm.spectral_decay_rate));
  const auto mp = max_principle_report(traj);
  check(v, mp.passed, "max |u|^2 = 1 + " + num(mp.max_v - 1.0) + " (tolerance " + num(mp.tolerance) + ")");
  const auto mono = check_nonincreasing(s.e_c, monotonicity_tolerance(s.e_c.front()));
  check(v, mono.passed, "E_c max step increase " + num(mono.max_increase) + " (tolerance " + num(mono.tolerance) + ")");
  const double h0 = hs_norm(u0, 0.5);
  double hsup = 0.0;
  for (const auto& u : traj.slices) hsup = std::max(hsup, hs_norm(u, 0.5));
  check(v, hsup <= h0 * (1.0 + 1e-6), "sup H^1/2 " + num(hsup) + " vs initial " + num(h0));
  const auto tails = tail_norm(traj, so.tail_cutoffs);
  check(v, tails.violations == 0, "tail bound violations " + std::to_string(tails.violations));
  v.summary = std::string(v.passed ? "simulate passed" : "simulate failed") + ": eps " + num(sc.eps) +
              ", T " + num(sc.final_time) + ", " + std::to_string(traj.size()) + " slices";

  m.tolerances = {{"max_principle", mp.tolerance}, {"critical_monotonicity", mono.tolerance},
                  {"sphere_admissibility", 1e-12}};
  for (const char* f : {"u0.snap", "final.snap", "trajectory.hwt", "series.csv"}) add_file(m, dir, f);
  if (traj.size() >= 3) add_file(m, dir, "identities.csv");
  finish(m, v, dir);
  return v;
}

AppVerdict run_picard_check(const RunConfig& cfg, const std::string& dir) {
  cfg.validate();
  prepare(dir);
  RunManifest m = begin("picard-check", cfg);
  const auto& sc = cfg.solver;
  const GridPtr grid = SpectralGrid::create(sc.box_length, sc.num_points);
  const VectorField3 u0 = make_initial(grid, cfg.data);

  AppVerdict v;
  v.passed = true;
  PicardResult full, half;
  try {
    full = picard_local_solve(u0, sc);
    SolverConfig hc = sc;
    hc.picard.window = 0.5 * sc.picard.window;
    half = picard_local_solve(u0, hc);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::non_contraction) throw;
    v.passed = false;
    v.summary = std::string("picard-check failed: ") + e.what();
    v.details.push_back("FAIL " + std::string(e.what()));
    finish(m, v, dir);
    return v;
  }

  CsvTable t;
  t.header = {"window [time]", "iterate [1]", "xT_difference [X_T]", "ratio [1]"};
  for (const auto* r : {&full, &half}) {
    const double w = r == &full ? sc.picard.window : 0.5 * sc.picard.window;
    const auto& d = r->report.xT_differences;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double ratio = j > 0 && d[j - 1] > 0.0 ? d[j] / d[j - 1] : std::nan("");
      t.add_row({w, double(j + 1), d[j], ratio});
    }
  }
  write_csv(t, path_in(dir, "picard.csv"));

  // Reference: the time stepper on the same window.
  SolverConfig ec = sc;
  ec.final_time = sc.picard.window;
  const auto steps = std::max<long>(1, std::lround(std::ceil(sc.picard.window / sc.dt - 1e-9)));
  ec.dt = sc.picard.window / double(steps);
  ec.output_stride = int(steps);
  const Trajectory ref = evolve(u0, ec);
  const double agree = l2_norm(ref.slices.back() - full.fixed_point);

  const auto& ratios = full.report.contraction_ratios;
  bool below = !ratios.empty();
  for (double r : ratios) below = below && r < 1.0;
  check(v, full.report.converged, "converged after " + std::to_string(full.report.iterates_kept) + " iterates");
  check(v, below, "all contraction ratios < 1 (geometric " + num(full.report.geometric_ratio) + ")");
  check(v, full.report.iterates_kept >= 5, "at least 5 iterates before convergence");
  check(v, half.report.geometric_ratio < full.report.geometric_ratio,
        "halved window ratio " + num(half.report.geometric_ratio));
  check(v, agree <= 1e-4, "fixed point vs stepper L2 difference " + num(agree));
  v.summary = std::string(v.passed ? "picard-check passed" : "picard-check failed") +
              ": ratio " + num(full.report.geometric_ratio) + ", agreement " + num(agree);
  m.tolerances = {{"picard_tolerance", sc.picard.tolerance}, {"stepper_agreement", 1e-4}};
  add_file(m, dir, "picard.csv");
  finish(m, v, dir);
  return v;
}

AppVerdict run_sweep(const RunConfig& cfg, const std::string& dir) {
  cfg.validate();
  const SweepPlan plan = cfg.sweep_plan();
  try {
    plan.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("sweep: ") + e.what());
  }
  prepare(dir);
  RunManifest m = begin("sweep", cfg);
  const SweepReport rep = run_viscosity_sweep(plan);

  CsvTable rungs;
  rungs.header = {"eps [1]", "N_pair [1/length]", "projected [bool]", "max_v [1]", "sphere_certificate [1]",
                  "Ec_max_increase [energy]", "h_half_initial [H^1/2]", "h_half_sup [H^1/2]",
                  "h1_growth_rate [1/time]", "dtu_low [L2tx]", "dtu_full [L2tx]", "tail [L2tx]",
                  "tail_bound [L2tx]", "seconds [s]"};
  for (const auto& r : rep.rungs)
    rungs.add_row({r.eps, r.pairing, r.projected ? 1.0 : 0.0, r.max_principle.max_v, r.sphere_certificate,
                   r.critical_monotonicity.max_increase, r.h_half_initial, r.h_half_sup, r.h1_growth_rate,
                   r.time_regularity.projected, r.time_regularity.full, r.tail_l2tx, r.tail_bound, r.seconds});
  write_csv(rungs, path_in(dir, "rungs.csv"));

  CsvTable battery;
  battery.header = {"eps [1]", "label", "regularized [abs]", "halfwave [abs]"};
  for (const auto& r : rep.rungs)
    for (std::size_t i = 0; i < r.battery.labels.size(); ++i)
      battery.rows.push_back({format_number(r.eps), r.battery.labels[i], format_number(r.battery.regularized[i]),
                              format_number(r.battery.halfwave[i])});
  write_csv(battery, path_in(dir, "battery.csv"));

  AppVerdict v;
  if (rep.aborted) {
    v.passed = false;
    v.summary = "sweep aborted: " + rep.abort_reason;
    v.details.push_back("FAIL " + v.summary);
    add_file(m, dir, "rungs.csv");
    add_file(m, dir, "battery.csv");
    finish(m, v, dir);
    return v;
  }

  CsvTable cauchy;
  cauchy.header = {"eps_coarse [1]", "eps_fine [1]"};
  for (std::size_t n = 0; n < rep.cauchy.size(); ++n) cauchy.header.push_back("window" + std::to_string(n) + " [L2tx]");
  cauchy.header.push_back("low_part [L2tx]");
  cauchy.header.push_back("high_part [L2tx]");
  for (std::size_t j = 0; j + 1 < rep.rungs.size(); ++j) {
    std::vector<double> row{rep.rungs[j].eps, rep.rungs[j + 1].eps};
    for (const auto& w : rep.cauchy) row.push_back(w[j]);
    row.push_back(rep.cauchy_low[j]);
    row.push_back(rep.cauchy_high[j]);
    cauchy.add_row(row);
  }
  write_csv(cauchy, path_in(dir, "cauchy.csv"));

  const LimitVerdict lv = certify_limit(rep);
  // The command also gates on the linear sphere envelope.
  v.passed = lv.passed && lv.envelope_ok;
  const CauchyTrend trend = cauchy_differences(rep);
  for (std::size_t n = 0; n < trend.slopes.size(); ++n)
    v.details.push_back("window " + std::to_string(n) + " Cauchy slope " + num(trend.slopes[n]) +
                        (trend.strictly_decreasing[n] ? " (strictly decreasing)" : " (not strictly decreasing)"));
  v.details.push_back("half-wave residual decreasing for " + std::to_string(lv.decreasing_count) + " of " +
                      std::to_string(lv.battery_size));
  v.details.push_back("sphere envelope intercept " + num(lv.envelope_intercept) + ", slope " +
                      num(lv.envelope_slope) + (lv.envelope_ok ? " (within 1e-6)" : " (above 1e-6)"));
  for (const auto& r : lv.reasons) v.details.push_back("FAIL " + r);
  if (!lv.envelope_ok) v.details.push_back("FAIL sphere envelope intercept above tolerance");
  v.summary = std::string(v.passed ? "sweep passed" : "sweep failed") + " over " +
              std::to_string(rep.rungs.size()) + " rungs";

  m.tolerances = {{"envelope_intercept", kEnvelopeInterceptTolerance},
                  {"min_decreasing", double(plan.min_decreasing)}};
  for (const char* f : {"rungs.csv", "battery.csv", "cauchy.csv"}) add_file(m, dir, f);
  finish(m, v, dir);
  return v;
}

AppVerdict run_weakres(const RunConfig& cfg, const std::string& trajectory_path, const std::string& dir) {
  cfg.validate();
  const Trajectory traj = read_trajectory(trajectory_path);
  prepare(dir);
  RunManifest m = begin("weakres", cfg);
  const auto battery = canonical_battery(traj.grid()->box_length(), traj.times.back());
  const BatteryResult res = evaluate_battery(traj, battery);

  CsvTable t;
  t.header = {"label", "time_term [1]", "initial_term [1]", "viscous_term [1]", "nonlinear_term [1]",
              "regularized [abs]", "halfwave [abs]", "regularized_rel [1]"};
  AppVerdict v;
  v.passed = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < res.labels.size(); ++i) {
    const auto& w = res.terms[i];
    const double scale = 1.0 + std::abs(w.time_term) + std::abs(w.initial_term) +
                         traj.config.eps * std::abs(w.viscous_term) + std::abs(w.nonlinear_term);
    const double rel = res.regularized[i] / scale;
    worst = std::max(worst, rel);
    t.rows.push_back({res.labels[i], format_number(w.time_term), format_number(w.initial_term),
                      format_number(w.viscous_term), format_number(w.nonlinear_term),
                      format_number(res.regularized[i]), format_number(res.halfwave[i]), format_number(rel)});
  }
  write_csv(t, path_in(dir, "weakres.csv"));
  check(v, worst <= cfg.diagnostics.weak_tolerance,
        "max relative regularized residual " + num(worst) + " (tolerance " + num(cfg.diagnostics.weak_tolerance) + ")");
  v.summary = std::string(v.passed ? "weakres passed" : "weakres failed") + " on " +
              std::to_string(res.labels.size()) + " test functions";
  m.tolerances = {{"weak_tolerance", cfg.diagnostics.weak_tolerance}};
  add_file(m, dir, "weakres.csv");
  finish(m, v, dir);
  return v;
}

AppVerdict run_lp_split(const RunConfig& cfg, const std::string& dir) {
  cfg.validate();
  prepare(dir);
  RunManifest m = begin("lp-split", cfg);
  const auto& sc = cfg.solver;
  const GridPtr grid = SpectralGrid::create(sc.box_length, sc.num_points);
  const Trajectory traj = evolve(make_initial(grid, cfg.data), sc);

  const TailReport tails = tail_norm(traj, cfg.diagnostics.tail_cutoffs);
  CsvTable tt;
  tt.header = {"t [time]", "N [1/length]", "tail [L2]", "bound [L2]"};
  for (std::size_t i = 0; i < tails.cutoffs.size(); ++i)
    for (std::size_t j = 0; j < traj.size(); ++j)
      tt.add_row({traj.times[j], tails.cutoffs[i], tails.tail[i][j], tails.bound[i][j]});
  write_csv(tt, path_in(dir, "tail.csv"));

  const auto profiles = battery_profiles(grid, sc.final_time);
  CsvTable ct;
  ct.header = {"slice", "profile", "N [1/length]", "commutator [L2]"};
  const auto& cut = cfg.diagnostics.commutator_cutoffs;
  const double s0 = commutator_slope(traj.slices.front(), cut, profiles, &ct, "initial");
  const double s1 = commutator_slope(traj.slices.back(), cut, profiles, &ct, "final");
  write_csv(ct, path_in(dir, "commutator.csv"));

  AppVerdict v;
  v.passed = true;
  check(v, tails.violations == 0, "tail bound violations " + std::to_string(tails.violations) +
                                      ", min slack " + num(tails.min_slack));
  check(v, s0 <= -0.8, "commutator exponent at t = 0: " + num(s0));
  check(v, s1 <= -0.8, "commutator exponent at t = T: " + num(s1));
  v.summary = std::string(v.passed ? "lp-split passed" : "lp-split failed") + ": exponents " + num(s0) +
              ", " + num(s1);
  m.tolerances = {{"commutator_exponent", -0.8}};
  add_file(m, dir, "tail.csv");
  add_file(m, dir, "commutator.csv");
  finish(m, v, dir);
  return v;
}

}  // namespace hwm
