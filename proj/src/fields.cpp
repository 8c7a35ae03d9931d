#include "hwm/fields.hpp"

#include <algorithm>
#include <cmath>

#include "hwm/error.hpp"

namespace hwm {

VectorField3::VectorField3(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) fail(ErrorCode::invalid_argument, "field needs a grid");
  for (auto& c : comp_) c.assign(grid_->size(), 0.0);
}

VectorField3::VectorField3(GridPtr grid, Vec3 value) : VectorField3(std::move(grid)) {
  for (int k = 0; k < 3; ++k) std::fill(comp_[k].begin(), comp_[k].end(), value[k]);
}

VectorField3::VectorField3(GridPtr grid, std::array<std::vector<double>, 3> components)
    : grid_(std::move(grid)), comp_(std::move(components)) {
  if (!grid_) fail(ErrorCode::invalid_argument, "field needs a grid");
  for (const auto& c : comp_)
    if (c.size() != grid_->size())
      fail(ErrorCode::dimension, "component length does not match grid size");
}

bool VectorField3::all_finite() const noexcept {
  for (const auto& c : comp_)
    for (double v : c)
      if (!std::isfinite(v)) return false;
  return true;
}

VectorField3& VectorField3::operator+=(const VectorField3& other) {
  require_same_grid(*this, other);
  for (int k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < size(); ++j) comp_[k][j] += other.comp_[k][j];
  return *this;
}

VectorField3& VectorField3::operator-=(const VectorField3& other) {
  require_same_grid(*this, other);
  for (int k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < size(); ++j) comp_[k][j] -= other.comp_[k][j];
  return *this;
}

VectorField3& VectorField3::operator*=(double c) {
  for (auto& comp : comp_)
    for (double& v : comp) v *= c;
  return *this;
}

VectorField3 operator+(VectorField3 a, const VectorField3& b) { return a += b; }
VectorField3 operator-(VectorField3 a, const VectorField3& b) { return a -= b; }
VectorField3 operator*(double c, VectorField3 a) { return a *= c; }

void require_same_grid(const VectorField3& a, const VectorField3& b) {
  if (!a.grid_ptr() || !b.grid_ptr() || !a.grid().compatible(b.grid()))
    fail(ErrorCode::dimension, "fields live on different grids");
}

SpectralField to_spectral(const VectorField3& f) {
  SpectralField out;
  for (int k = 0; k < 3; ++k) {
    out[k].resize(f.grid().spectral_size());
    f.grid().forward(f.component(k), out[k]);
  }
  return out;
}

VectorField3 to_physical(const GridPtr& grid, const SpectralField& coeffs) {
  VectorField3 out(grid);
  std::vector<Complex> scratch(grid->spectral_size());
  for (int k = 0; k < 3; ++k) grid->inverse(coeffs[k], out.component(k), scratch);
  return out;
}

namespace {

// Samples of f on the padded grid, by zero-padding the spectrum.
std::array<std::vector<double>, 3> pad(const VectorField3& f, const SpectralGrid& fine) {
  const std::size_t half = f.grid().size() / 2;
  std::vector<Complex> c(f.grid().spectral_size());
  std::vector<Complex> cf(fine.spectral_size()), scratch(fine.spectral_size());
  std::array<std::vector<double>, 3> out;
  for (int k = 0; k < 3; ++k) {
    f.grid().forward(f.component(k), c);
    std::fill(cf.begin(), cf.end(), Complex{});
    std::copy(c.begin(), c.end(), cf.begin());
    cf[half] = 0.5 * c[half].real();  // split the Nyquist cosine between +-xi
    out[k].resize(fine.size());
    fine.inverse(cf, out[k], scratch);
  }
  return out;
}

VectorField3 cross_dealiased(const VectorField3& a, const VectorField3& b) {
  const auto& fine = a.grid().padded();
  const auto pa = pad(a, fine);
  const auto pb = pad(b, fine);
  std::array<std::vector<double>, 3> prod;
  for (auto& p : prod) p.resize(fine.size());
  for (std::size_t j = 0; j < fine.size(); ++j) {
    const Vec3 u{pa[0][j], pa[1][j], pa[2][j]};
    const Vec3 v{pb[0][j], pb[1][j], pb[2][j]};
    const Vec3 w = cross(u, v);
    prod[0][j] = w.x;
    prod[1][j] = w.y;
    prod[2][j] = w.z;
  }
  const std::size_t half = a.grid().size() / 2;
  std::vector<Complex> cf(fine.spectral_size());
  std::vector<Complex> c(a.grid().spectral_size()), scratch(c.size());
  VectorField3 out(a.grid_ptr());
  for (int k = 0; k < 3; ++k) {
    fine.forward(prod[k], cf);
    std::copy(cf.begin(), cf.begin() + long(c.size()), c.begin());
    c[half] = 2.0 * cf[half].real();
    a.grid().inverse(c, out.component(k), scratch);
  }
  return out;
}

}  // namespace

VectorField3 cross(const VectorField3& a, const VectorField3& b, bool dealias) {
  require_same_grid(a, b);
  if (dealias) return cross_dealiased(a, b);
  VectorField3 out(a.grid_ptr());
  for (std::size_t j = 0; j < a.size(); ++j) out.set(j, cross(a.at(j), b.at(j)));
  return out;
}

std::vector<double> dot(const VectorField3& a, const VectorField3& b) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = dot(a.at(j), b.at(j));
  return out;
}

std::vector<double> squared_magnitude(const VectorField3& f) { return dot(f, f); }

double inner(const VectorField3& a, const VectorField3& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto x = a.component(k);
    const auto y = b.component(k);
    for (std::size_t j = 0; j < x.size(); ++j) sum += x[j] * y[j];
  }
  return a.grid().spacing() * sum;
}

double l2_norm(const VectorField3& f) { return std::sqrt(inner(f, f)); }

double linf_norm(const VectorField3& f) {
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) m = std::max(m, f.at(j).norm());
  return m;
}

double hs_norm(const SpectralGrid& grid, const SpectralField& coeffs, double s) {
  if (!(s >= 0.0)) fail(ErrorCode::domain, "Sobolev exponent must be nonnegative");
  const auto xi = grid.abs_wavenumbers();
  double sum = 0.0;
  for (const auto& c : coeffs) {
    for (std::size_t r = 0; r < xi.size(); ++r) {
      const double w = (r == 0 || grid.is_nyquist(r)) ? 1.0 : 2.0;
      const double g = s == 0.0 ? 1.0 : (xi[r] == 0.0 ? 0.0 : std::pow(xi[r], 2.0 * s));
      sum += w * g * std::norm(c[r]);
    }
  }
  return std::sqrt(grid.box_length() * sum);
}

double hs_norm(const VectorField3& f, double s) {
  return hs_norm(f.grid(), to_spectral(f), s);
}

double sphere_deviation(const VectorField3& f) {
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const Vec3 v = f.at(j);
    m = std::max(m, std::abs(dot(v, v) - 1.0));
  }
  return m;
}

}  // namespace hwm
