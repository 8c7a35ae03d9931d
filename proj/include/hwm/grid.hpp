#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace hwm {

using Complex = std::complex<double>;

/// Periodic box [-L/2, L/2) sampled at M equispaced points, together with the
/// wavenumber table and the real-to-complex transform plans.
///
/// Spectral arrays use the half-spectrum layout of a real transform: index r
/// in [0, M/2] carries the mode k = r, and index M/2 is the unpaired Nyquist
/// mode k = -M/2. Coefficients are normalized as c_k = (1/M) sum_j f_j
/// exp(-i xi_k (x_j - x_0)), which is the quadrature of (1/L) int f e^{-i xi x}.
///
/// Immutable after construction; transforms may be called concurrently as long
/// as every caller passes its own buffers.
class SpectralGrid {
 public:
  static std::shared_ptr<const SpectralGrid> create(double box_length,
                                                    std::size_t num_points);

  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;
  ~SpectralGrid();

  double box_length() const noexcept { return box_length_; }
  std::size_t size() const noexcept { return num_points_; }
  std::size_t spectral_size() const noexcept { return num_points_ / 2 + 1; }
  double spacing() const noexcept { return box_length_ / double(num_points_); }
  /// pi M / L, the largest resolved |xi|.
  double nyquist() const noexcept;

  std::span<const double> coordinates() const noexcept { return coords_; }
  /// |xi| for each half-spectrum index.
  std::span<const double> abs_wavenumbers() const noexcept { return abs_xi_; }
  /// Signed xi_k for k = -M/2, ..., M/2 - 1 in increasing k order.
  std::vector<double> signed_wavenumbers() const;

  bool is_nyquist(std::size_t r) const noexcept { return r == num_points_ / 2; }

  bool compatible(const SpectralGrid& other) const noexcept {
    return this == &other || (num_points_ == other.num_points_ &&
                              box_length_ == other.box_length_);
  }

  /// out = normalized coefficients of in. Sizes must be M and M/2+1.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// out = sum_k c_k e^{i xi_k (x - x_0)}. The input is left untouched;
  /// scratch must have spectral_size() entries.
  void inverse(std::span<const Complex> in, std::span<double> out,
               std::span<Complex> scratch) const;

  /// Grid with >= 3M/2 points on the same box, used for dealiased products.
  const SpectralGrid& padded() const;

 private:
  SpectralGrid(double box_length, std::size_t num_points);

  double box_length_;
  std::size_t num_points_;
  std::vector<double> coords_;
  std::vector<double> abs_xi_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;

  mutable std::once_flag padded_once_;
  mutable std::shared_ptr<const SpectralGrid> padded_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

}  // namespace hwm
