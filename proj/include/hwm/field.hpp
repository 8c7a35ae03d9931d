#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "hwm/grid.hpp"

namespace hwm {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double c, Vec3 a) { return {c * a.x, c * a.y, c * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// One time slice of a map R -> R^3 sampled on a SpectralGrid, stored as three
/// component arrays.
class VectorField3 {
 public:
  VectorField3() = default;
  /// Zero field on the grid.
  explicit VectorField3(GridPtr grid);
  /// Constant field.
  VectorField3(GridPtr grid, Vec3 value);
  VectorField3(GridPtr grid, std::array<std::vector<double>, 3> components);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const SpectralGrid& grid() const noexcept { return *grid_; }
  std::size_t size() const noexcept { return comp_[0].size(); }

  std::span<double> component(int c) noexcept { return comp_[c]; }
  std::span<const double> component(int c) const noexcept { return comp_[c]; }
  const std::array<std::vector<double>, 3>& components() const noexcept { return comp_; }

  Vec3 at(std::size_t j) const { return {comp_[0][j], comp_[1][j], comp_[2][j]}; }
  void set(std::size_t j, Vec3 v) {
    comp_[0][j] = v.x;
    comp_[1][j] = v.y;
    comp_[2][j] = v.z;
  }

  bool all_finite() const noexcept;

  VectorField3& operator+=(const VectorField3& other);
  VectorField3& operator-=(const VectorField3& other);
  VectorField3& operator*=(double c);

 private:
  GridPtr grid_;
  std::array<std::vector<double>, 3> comp_;
};

VectorField3 operator+(VectorField3 a, const VectorField3& b);
VectorField3 operator-(VectorField3 a, const VectorField3& b);
VectorField3 operator*(double c, VectorField3 a);

/// Throws ErrorCode::dimension unless both fields live on compatible grids.
void require_same_grid(const VectorField3& a, const VectorField3& b);

/// Half-spectrum coefficients of the three components.
using SpectralField = std::array<std::vector<Complex>, 3>;

SpectralField to_spectral(const VectorField3& f);
VectorField3 to_physical(const GridPtr& grid, const SpectralField& coeffs);

}  // namespace hwm
