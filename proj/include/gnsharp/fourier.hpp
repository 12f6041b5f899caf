#pragma once

#include <Eigen/Dense>

#include "gnsharp/discretization.hpp"

namespace gnsharp {

/// Full complex n-D DFT of real grid samples (unnormalized forward, 1/Nⁿ on
/// the inverse). Plans live in a thread_local engine, so concurrent callers
/// never share scratch state.
Eigen::ArrayXcd forward_transform(const PeriodicGrid& grid, const Eigen::ArrayXd& values);
Eigen::ArrayXd inverse_transform(const PeriodicGrid& grid, const Eigen::ArrayXcd& spectrum);

/// Signed integer frequency of DFT index m on an N-point axis; the Nyquist
/// index N/2 maps to −N/2.
inline int signed_frequency(int m, int n) { return m < n / 2 ? m : m - n; }

/// |k|² over the flat spectral index, in integer units.
Eigen::ArrayXd squared_wavenumbers(const PeriodicGrid& grid);

/// Trigonometric interpolant of the samples, evaluated at an arbitrary point.
/// Takes the forward spectrum so repeated evaluations reuse it.
double evaluate_interpolant(const PeriodicGrid& grid, const Eigen::ArrayXcd& spectrum, const Eigen::VectorXd& x);

/// Samples g(x) = f(x / factor) on the same grid by trigonometric
/// interpolation along each axis (separable, exact for band-limited f whose
/// dilated copy stays inside the box).
Field dilate_field(const Field& f, double factor);

/// Periodic shift by an integer number of cells along each axis.
Field shift_field(const Field& f, std::span<const int> cells);

}  // namespace gnsharp
