#include "hwm/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hwm/error.hpp"

namespace hwm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension: return "dimension error";
    case ErrorCode::domain: return "domain error";
    case ErrorCode::config: return "config error";
    case ErrorCode::io: return "i/o error";
    case ErrorCode::format: return "format error";
    case ErrorCode::blow_up: return "blow-up";
    case ErrorCode::stability: return "stability violation";
    case ErrorCode::non_contraction: return "non-contraction";
    case ErrorCode::internal: return "internal error";
  }
  return "unknown error";
}

namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::shared_ptr<const SpectralGrid> SpectralGrid::create(double box_length,
                                                         std::size_t num_points) {
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    fail(ErrorCode::domain, "box length must be positive and finite");
  if (num_points < 8 || num_points % 2 != 0)
    fail(ErrorCode::domain, "number of grid points must be even and at least 8");
  return std::shared_ptr<const SpectralGrid>(new SpectralGrid(box_length, num_points));
}

SpectralGrid::SpectralGrid(double box_length, std::size_t num_points)
    : box_length_(box_length), num_points_(num_points) {
  const double h = spacing();
  coords_.resize(num_points_);
  for (std::size_t j = 0; j < num_points_; ++j)
    coords_[j] = -0.5 * box_length_ + double(j) * h;

  abs_xi_.resize(spectral_size());
  const double dk = 2.0 * std::numbers::pi / box_length_;
  for (std::size_t r = 0; r < abs_xi_.size(); ++r) abs_xi_[r] = dk * double(r);

  std::vector<double> real(num_points_);
  std::vector<Complex> cplx(spectral_size());
  const int n = int(num_points_);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(n, real.data(), as_fftw(cplx.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, as_fftw(cplx.data()), real.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!forward_plan_ || !inverse_plan_) fail(ErrorCode::internal, "FFT planning failed");
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

double SpectralGrid::nyquist() const noexcept {
  return std::numbers::pi * double(num_points_) / box_length_;
}

std::vector<double> SpectralGrid::signed_wavenumbers() const {
  const double dk = 2.0 * std::numbers::pi / box_length_;
  const long half = long(num_points_ / 2);
  std::vector<double> xi;
  xi.reserve(num_points_);
  for (long k = -half; k < half; ++k) xi.push_back(dk * double(k));
  return xi;
}

void SpectralGrid::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != num_points_ || out.size() != spectral_size())
    fail(ErrorCode::dimension, "forward transform: buffer size mismatch");
  // r2c does not modify its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       as_fftw(out.data()));
  const double scale = 1.0 / double(num_points_);
  for (auto& c : out) c *= scale;
}

void SpectralGrid::inverse(std::span<const Complex> in, std::span<double> out,
                           std::span<Complex> scratch) const {
  if (in.size() != spectral_size() || scratch.size() != spectral_size() ||
      out.size() != num_points_)
    fail(ErrorCode::dimension, "inverse transform: buffer size mismatch");
  std::copy(in.begin(), in.end(), scratch.begin());
  // Imaginary parts of the zero and Nyquist modes carry no real signal.
  scratch.front().imag(0.0);
  scratch.back().imag(0.0);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), as_fftw(scratch.data()),
                       out.data());
}

const SpectralGrid& SpectralGrid::padded() const {
  std::call_once(padded_once_, [this] {
    std::size_t m = (3 * num_points_ + 1) / 2;
    if (m % 2) ++m;
    padded_ = create(box_length_, m);
  });
  return *padded_;
}

// ---------------------------------------------------------------------------

void MultiplierSpec::validate(const SpectralGrid& grid) const {
  switch (kind) {
    case Kind::fractional_laplacian:
      if (!(s >= 0.0 && s <= 2.0))
        fail(ErrorCode::domain, "fractional_laplacian exponent must lie in [0, 2]");
      break;
    case Kind::heat:
      if (!(eps > 0.0) || !(t >= 0.0) || !std::isfinite(eps) || !std::isfinite(t))
        fail(ErrorCode::domain, "heat multiplier needs eps > 0 and t >= 0");
      break;
    case Kind::lp_low:
    case Kind::lp_high:
      if (!(cutoff > 0.0))
        fail(ErrorCode::domain, "Littlewood-Paley cutoff must be positive");
      if (cutoff > grid.nyquist()) {
        std::ostringstream os;
        os << "Littlewood-Paley cutoff " << cutoff << " exceeds Nyquist " << grid.nyquist();
        fail(ErrorCode::domain, os.str());
      }
      break;
    case Kind::hilbert:
    case Kind::derivative:
      break;
  }
}

Complex MultiplierSpec::gain(double xi, bool nyquist) const {
  const double a = std::abs(xi);
  switch (kind) {
    case Kind::fractional_laplacian:
      // Zero mode dropped for every s, so s = 0 removes the mean.
      if (a == 0.0) return 0.0;
      return s == 0.0 ? 1.0 : std::pow(a, s);
    case Kind::hilbert:
      if (nyquist || xi == 0.0) return 0.0;
      return {0.0, xi > 0.0 ? -1.0 : 1.0};
    case Kind::heat:
      return std::exp(-eps * xi * xi * t);
    case Kind::lp_low:
      return a < cutoff ? 1.0 : 0.0;
    case Kind::lp_high:
      return a < cutoff ? 0.0 : 1.0;
    case Kind::derivative:
      if (nyquist) return 0.0;
      return {0.0, xi};
  }
  return 0.0;
}

std::vector<Complex> MultiplierSpec::table(const SpectralGrid& grid) const {
  validate(grid);
  const auto xi = grid.abs_wavenumbers();
  std::vector<Complex> g(xi.size());
  for (std::size_t r = 0; r < xi.size(); ++r) {
    const bool nyq = grid.is_nyquist(r);
    g[r] = gain(nyq ? -xi[r] : xi[r], nyq);
  }
  return g;
}

std::string MultiplierSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::fractional_laplacian: os << "fractional_laplacian(s=" << s << ")"; break;
    case Kind::hilbert: os << "hilbert"; break;
    case Kind::heat: os << "heat(eps=" << eps << ", t=" << t << ")"; break;
    case Kind::lp_low: os << "lp_low(N=" << cutoff << ")"; break;
    case Kind::lp_high: os << "lp_high(N=" << cutoff << ")"; break;
    case Kind::derivative: os << "derivative"; break;
  }
  return os.str();
}

void apply_multiplier(const SpectralGrid& grid, const std::vector<Complex>& gains,
                      std::span<const double> in, std::span<double> out, Workspace& ws) {
  auto& c = ws.coeffs();
  if (gains.size() != grid.spectral_size() || c.size() != grid.spectral_size())
    fail(ErrorCode::dimension, "multiplier table does not match grid");
  grid.forward(in, c);
  for (std::size_t r = 0; r < c.size(); ++r) c[r] *= gains[r];
  grid.inverse(c, out, ws.scratch());
}

VectorField3 apply_multiplier(const SpectralGrid& grid, const MultiplierSpec& spec,
                              const VectorField3& f, Workspace& ws) {
  if (!f.grid_ptr() || !grid.compatible(f.grid()))
    fail(ErrorCode::dimension, "field is not sampled on the multiplier's grid");
  const auto gains = spec.table(grid);
  VectorField3 out(f.grid_ptr());
  for (int k = 0; k < 3; ++k) apply_multiplier(grid, gains, f.component(k), out.component(k), ws);
  return out;
}

VectorField3 apply_multiplier(const SpectralGrid& grid, const MultiplierSpec& spec,
                              const VectorField3& f) {
  Workspace ws(grid);
  return apply_multiplier(grid, spec, f, ws);
}

VectorField3 apply_multiplier(const MultiplierSpec& spec, const VectorField3& f) {
  return apply_multiplier(f.grid(), spec, f);
}

double compose_check(const SpectralGrid& grid, const VectorField3& f) {
  Workspace ws(grid);
  const auto dx = apply_multiplier(grid, MultiplierSpec::derivative(), f, ws);
  const auto lhs = apply_multiplier(grid, MultiplierSpec::hilbert(), dx, ws);
  const auto rhs = apply_multiplier(grid, MultiplierSpec::fractional_laplacian(1.0), f, ws);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double d = lhs.component(k)[j] - rhs.component(k)[j];
      num += d * d;
      den += f.component(k)[j] * f.component(k)[j];
    }
  }
  const double h = grid.spacing();
  return std::sqrt(h * num) / std::max(std::sqrt(h * den), 1e-30);
}

}  // namespace hwm
