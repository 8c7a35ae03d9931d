#pragma once

#include <vector>

#include "hwm/field.hpp"
#include "hwm/spectral.hpp"

namespace hwm {

/// Pointwise cross product on the collocation grid. With dealias set, both
/// factors are zero-padded to the 3/2 grid before multiplying.
VectorField3 cross(const VectorField3& a, const VectorField3& b, bool dealias = false);

/// Pointwise dot product.
std::vector<double> dot(const VectorField3& a, const VectorField3& b);

/// Pointwise |f(x)|^2.
std::vector<double> squared_magnitude(const VectorField3& f);

/// Trapezoid L2 norm over the box (all components).
double l2_norm(const VectorField3& f);
/// max_x |f(x)| (Euclidean length in R^3).
double linf_norm(const VectorField3& f);
/// Trapezoid integral of a.b over the box.
double inner(const VectorField3& a, const VectorField3& b);

/// Homogeneous Sobolev norm (L sum_k |xi_k|^{2s} |f_hat_k|^2)^{1/2}, summed over
/// components. s = 0 gives the L2 norm.
double hs_norm(const VectorField3& f, double s);
/// Same from precomputed coefficients.
double hs_norm(const SpectralGrid& grid, const SpectralField& coeffs, double s);

/// max_x | |f(x)|^2 - 1 |
double sphere_deviation(const VectorField3& f);

}  // namespace hwm
