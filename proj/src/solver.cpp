#include "hwm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hwm/error.hpp"
#include "hwm/fields.hpp"

namespace hwm {

std::string to_string(Integrator integrator) {
  return integrator == Integrator::etd_rk2 ? "etd_rk2" : "ifrk4";
}

Integrator parse_integrator(const std::string& name) {
  if (name == "etd_rk2") return Integrator::etd_rk2;
  if (name == "ifrk4") return Integrator::ifrk4;
  fail(ErrorCode::config, "unknown integrator '" + name + "'");
}

std::size_t SolverConfig::num_steps() const {
  return std::size_t(std::llround(final_time / dt));
}

// Linearized about a constant state the nonlinearity has eigenvalues +-i|xi|,
// so dt * max|xi| must sit inside the explicit scheme's imaginary-axis range.
// RK2 is only weakly unstable there; 0.5 keeps the per-step growth below 1%.
double SolverConfig::stability_constant(Integrator integrator) {
  return integrator == Integrator::etd_rk2 ? 0.5 : 2.0;
}

void SolverConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::domain, what); };
  if (!(eps > 0.0) || !std::isfinite(eps)) bad("eps must be positive");
  if (!(final_time > 0.0) || !std::isfinite(final_time)) bad("T must be positive");
  if (!(dt > 0.0) || dt > final_time) bad("dt must satisfy 0 < dt <= T");
  if (!(box_length > 0.0)) bad("box length must be positive");
  if (num_points < 8 || num_points % 2) bad("grid points must be even and >= 8");
  if (output_stride < 1) bad("output_stride must be a positive integer");
  const auto n = num_steps();
  if (std::abs(double(n) * dt - final_time) > 1e-9 * final_time)
    bad("T must be an integer multiple of dt");
  if (n % std::size_t(output_stride) != 0)
    bad("number of steps must be a multiple of output_stride");
  if (picard.max_iters < 1) bad("picard max_iters must be >= 1");
  if (picard.duhamel_substeps < 8) bad("picard duhamel_substeps must be >= 8");
  if (!(picard.window > 0.0) || picard.window > final_time) bad("picard window must lie in (0, T]");
  if (!(picard.tolerance > 0.0)) bad("picard tolerance must be positive");

  const double cfl = dt * std::numbers::pi * double(num_points) / box_length;
  if (cfl > stability_constant(integrator)) {
    std::ostringstream os;
    os << "dt * max|xi| = " << cfl << " exceeds the " << to_string(integrator)
       << " stability constant " << stability_constant(integrator);
    fail(ErrorCode::stability, os.str());
  }
}

void Trajectory::validate() const {
  if (slices.empty() || slices.size() != times.size())
    fail(ErrorCode::invalid_argument, "trajectory needs one time per slice");
  if (times.front() != 0.0) fail(ErrorCode::invalid_argument, "trajectory must start at t = 0");
  const double stride = stride_time();
  for (std::size_t j = 0; j < slices.size(); ++j) {
    require_same_grid(slices[j], slices.front());
    if (j && std::abs((times[j] - times[j - 1]) - stride) > 1e-12 * stride + 1e-15)
      fail(ErrorCode::invalid_argument, "trajectory times are not uniformly strided");
  }
}

// ---------------------------------------------------------------------------

double etd_phi1(double z) {
  if (z == 0.0) return 1.0;
  if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0;
  return std::expm1(z) / z;
}

double etd_phi2(double z) {
  if (std::abs(z) < 5e-2) {
    // Horner form of sum_{k>=0} z^k / (k+2)!
    double acc = 1.0 / 40320.0;
    for (double d : {5040.0, 720.0, 120.0, 24.0, 6.0, 2.0}) acc = 1.0 / d + z * acc;
    return acc;
  }
  return (std::expm1(z) - z) / (z * z);
}

VectorField3 nonlinearity(const VectorField3& u, bool dealias) {
  // (-Delta)^{1/2} has gain |xi|, i.e. fractional_laplacian(1).
  const auto half = apply_multiplier(MultiplierSpec::fractional_laplacian(1.0), u);
  return cross(u, half, dealias);
}

Stepper::Stepper(const SolverConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  grid_ = SpectralGrid::create(cfg_.box_length, cfg_.num_points);
  const auto xi = grid_->abs_wavenumbers();
  const std::size_t n = xi.size();
  lap_half_.assign(xi.begin(), xi.end());
  decay_.resize(n);
  decay_half_.resize(n);
  phi1_.resize(n);
  phi2_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double z = -cfg_.eps * xi[r] * xi[r] * cfg_.dt;
    decay_[r] = std::exp(z);
    decay_half_[r] = std::exp(0.5 * z);
    phi1_[r] = cfg_.dt * etd_phi1(z);
    phi2_[r] = cfg_.dt * etd_phi2(z);
  }
  scratch_.resize(n);
}

SpectralField Stepper::spectral_nonlinearity(const SpectralField& u_hat) {
  VectorField3 u(grid_), half(grid_);
  std::vector<Complex> c(grid_->spectral_size());
  for (int k = 0; k < 3; ++k) {
    grid_->inverse(u_hat[k], u.component(k), scratch_);
    for (std::size_t r = 0; r < c.size(); ++r) c[r] = lap_half_[r] * u_hat[k][r];
    grid_->inverse(c, half.component(k), scratch_);
  }
  return to_spectral(cross(u, half, cfg_.dealias));
}

namespace {

// out = a * x + b * y, per mode.
void axpby(const std::vector<double>& a, const SpectralField& x, const std::vector<double>& b,
           const SpectralField& y, SpectralField& out) {
  for (int k = 0; k < 3; ++k) {
    out[k].resize(x[k].size());
    for (std::size_t r = 0; r < x[k].size(); ++r) out[k][r] = a[r] * x[k][r] + b[r] * y[k][r];
  }
}

}  // namespace

SpectralField Stepper::step_etd_rk2(const SpectralField& u_hat) {
  // Cox-Matthews ETD2RK.
  const SpectralField n0 = spectral_nonlinearity(u_hat);
  SpectralField a;
  axpby(decay_, u_hat, phi1_, n0, a);
  const SpectralField na = spectral_nonlinearity(a);
  SpectralField out = a;
  for (int k = 0; k < 3; ++k)
    for (std::size_t r = 0; r < out[k].size(); ++r) out[k][r] += phi2_[r] * (na[k][r] - n0[k][r]);
  return out;
}

SpectralField Stepper::step_ifrk4(const SpectralField& u_hat) {
  const double h = cfg_.dt;
  const std::size_t n = decay_.size();
  SpectralField stage;
  for (auto& s : stage) s.resize(n);

  const SpectralField k1 = spectral_nonlinearity(u_hat);
  for (int c = 0; c < 3; ++c)
    for (std::size_t r = 0; r < n; ++r)
      stage[c][r] = decay_half_[r] * (u_hat[c][r] + 0.5 * h * k1[c][r]);
  const SpectralField k2 = spectral_nonlinearity(stage);
  for (int c = 0; c < 3; ++c)
    for (std::size_t r = 0; r < n; ++r)
      stage[c][r] = decay_half_[r] * u_hat[c][r] + 0.5 * h * k2[c][r];
  const SpectralField k3 = spectral_nonlinearity(stage);
  for (int c = 0; c < 3; ++c)
    for (std::size_t r = 0; r < n; ++r)
      stage[c][r] = decay_[r] * u_hat[c][r] + h * decay_half_[r] * k3[c][r];
  const SpectralField k4 = spectral_nonlinearity(stage);

  SpectralField out;
  for (int c = 0; c < 3; ++c) {
    out[c].resize(n);
    for (std::size_t r = 0; r < n; ++r)
      out[c][r] = decay_[r] * u_hat[c][r] +
                  h / 6.0 *
                      (decay_[r] * k1[c][r] + 2.0 * decay_half_[r] * (k2[c][r] + k3[c][r]) +
                       k4[c][r]);
  }
  return out;
}

VectorField3 Stepper::step(const VectorField3& u, double t) {
  if (!grid_->compatible(u.grid()))
    fail(ErrorCode::dimension, "field grid does not match solver grid");
  const SpectralField u_hat = to_spectral(u);
  const SpectralField next =
      cfg_.integrator == Integrator::etd_rk2 ? step_etd_rk2(u_hat) : step_ifrk4(u_hat);
  VectorField3 out = to_physical(u.grid_ptr(), next);
  if (!out.all_finite()) {
    std::ostringstream os;
    os << "non-finite field after step ending at t = " << t + cfg_.dt
       << " (L2 norm of input " << l2_norm(u) << ", L2 norm of output " << l2_norm(out) << ")";
    fail(ErrorCode::blow_up, os.str());
  }
  if (cfg_.project_to_sphere) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      const Vec3 v = out.at(j);
      out.set(j, (1.0 / v.norm()) * v);
    }
  }
  return out;
}

VectorField3 step(const VectorField3& u, const SolverConfig& cfg) {
  Stepper stepper(cfg);
  return stepper.step(u);
}

Trajectory evolve(const VectorField3& u0, const SolverConfig& cfg,
                  const std::function<void(double, const VectorField3&)>& observer) {
  Stepper stepper(cfg);
  if (!u0.all_finite()) fail(ErrorCode::invalid_argument, "initial data is not finite");
  Trajectory traj;
  traj.config = stepper.config();
  const std::size_t steps = traj.config.num_steps();
  const std::size_t stride = std::size_t(traj.config.output_stride);
  traj.times.reserve(steps / stride + 1);
  traj.slices.reserve(steps / stride + 1);

  VectorField3 u = u0;
  traj.times.push_back(0.0);
  traj.slices.push_back(u);
  if (observer) observer(0.0, u);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = double(n) * traj.config.dt;
    u = stepper.step(u, t);
    if ((n + 1) % stride == 0) {
      const double tn = double(n + 1) * traj.config.dt;
      traj.times.push_back(tn);
      traj.slices.push_back(u);
      if (observer) observer(tn, u);
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------

double xT_distance(const std::vector<VectorField3>& a, const std::vector<VectorField3>& b) {
  if (a.size() != b.size()) fail(ErrorCode::dimension, "iterates have different node counts");
  double sup_inf = 0.0, sup_h1 = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const VectorField3 d = a[m] - b[m];
    sup_inf = std::max(sup_inf, linf_norm(d));
    sup_h1 = std::max(sup_h1, hs_norm(d, 1.0));
  }
  return sup_inf + sup_h1;
}

PicardResult picard_local_solve(const VectorField3& u0, const SolverConfig& cfg) {
  cfg.validate();
  const auto& opts = cfg.picard;
  const GridPtr& grid = u0.grid_ptr();
  if (grid->size() != cfg.num_points || grid->box_length() != cfg.box_length)
    fail(ErrorCode::dimension, "initial data grid does not match the solver config");

  // The Duhamel integral needs N at every node; reuse the stepper's spectral
  // nonlinearity (dt is irrelevant here).
  SolverConfig local = cfg;
  local.final_time = opts.window;
  local.dt = opts.window / double(opts.duhamel_substeps);
  local.output_stride = 1;
  local.integrator = Integrator::etd_rk2;
  Stepper stepper(local);

  const int nodes = opts.duhamel_substeps + 1;
  const double h = local.dt;
  const auto xi = grid->abs_wavenumbers();
  const std::size_t ns = xi.size();
  // heat gain for lag m*h
  std::vector<std::vector<double>> lag(nodes, std::vector<double>(ns));
  for (int m = 0; m < nodes; ++m)
    for (std::size_t r = 0; r < ns; ++r) lag[m][r] = std::exp(-cfg.eps * xi[r] * xi[r] * h * m);

  const SpectralField u0_hat = to_spectral(u0);
  std::vector<SpectralField> free(nodes);  // K(t_m) * u0
  for (int m = 0; m < nodes; ++m)
    for (int c = 0; c < 3; ++c) {
      free[m][c].resize(ns);
      for (std::size_t r = 0; r < ns; ++r) free[m][c][r] = lag[m][r] * u0_hat[c][r];
    }

  auto to_fields = [&](const std::vector<SpectralField>& s) {
    std::vector<VectorField3> out;
    out.reserve(s.size());
    for (const auto& f : s) out.push_back(to_physical(grid, f));
    return out;
  };

  std::vector<SpectralField> current = free;
  std::vector<VectorField3> current_x = to_fields(current);
  PicardResult result;
  for (int m = 0; m < nodes; ++m) result.node_times.push_back(h * m);
  auto& rep = result.report;

  double scale = 0.0;
  for (const auto& f : current_x) scale = std::max(scale, linf_norm(f) + hs_norm(f, 1.0));
  const double floor = 1e-13 * (1.0 + scale);

  int growth_streak = 0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    std::vector<SpectralField> nl(nodes);
    for (int m = 0; m < nodes; ++m) nl[m] = stepper.spectral_nonlinearity(current[m]);

    std::vector<SpectralField> next = free;
    for (int m = 1; m < nodes; ++m) {
      for (int i = 0; i <= m; ++i) {
        const double w = (i == 0 || i == m) ? 0.5 * h : h;
        const auto& g = lag[m - i];
        for (int c = 0; c < 3; ++c)
          for (std::size_t r = 0; r < ns; ++r) next[m][c][r] += w * g[r] * nl[i][c][r];
      }
    }
    std::vector<VectorField3> next_x = to_fields(next);
    for (const auto& f : next_x)
      if (!f.all_finite()) fail(ErrorCode::blow_up, "Picard iterate is not finite");

    const double d = xT_distance(next_x, current_x);
    rep.xT_differences.push_back(d);
    rep.iterates_kept = it;
    current = std::move(next);
    current_x = std::move(next_x);

    const auto& diffs = rep.xT_differences;
    if (diffs.size() >= 2 && diffs[diffs.size() - 2] > floor) {
      const double ratio = d / diffs[diffs.size() - 2];
      rep.contraction_ratios.push_back(ratio);
      growth_streak = ratio >= 1.0 ? growth_streak + 1 : 0;
      if (growth_streak >= 2) {
        std::ostringstream os;
        os << "Picard iteration is not contracting on [0, " << opts.window
           << "] (ratio " << ratio << " at iterate " << it << "); reduce the window T_loc";
        fail(ErrorCode::non_contraction, os.str());
      }
    }
    if (d <= opts.tolerance) {
      rep.converged = true;
      break;
    }
  }

  const std::size_t lead = std::min<std::size_t>(4, rep.contraction_ratios.size());
  if (lead > 0) {
    double lg = 0.0;
    for (std::size_t i = 0; i < lead; ++i) lg += std::log(rep.contraction_ratios[i]);
    rep.geometric_ratio = std::exp(lg / double(lead));
  }
  result.fixed_point = current_x.back();
  return result;
}

}  // namespace hwm
