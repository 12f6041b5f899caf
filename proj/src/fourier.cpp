#include "gnsharp/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <numbers>
#include <vector>

namespace gnsharp {

namespace {

Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// Applies a 1-D transform along every axis of a row-major n-D array.
void transform_axes(const PeriodicGrid& grid, Eigen::ArrayXcd& data, bool inverse) {
  auto& fft = engine();
  const int n = grid.points();
  const Eigen::Index total = grid.size();
  std::vector<std::complex<double>> in(n), out(n);
  Eigen::Index stride = 1;
  for (int axis = grid.dim() - 1; axis >= 0; --axis) {
    const Eigen::Index block = stride * n;
    for (Eigen::Index outer = 0; outer < total; outer += block) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        const Eigen::Index base = outer + inner;
        for (int j = 0; j < n; ++j) in[j] = data(base + j * stride);
        if (inverse)
          fft.inv(out.data(), in.data(), n);
        else
          fft.fwd(out.data(), in.data(), n);
        for (int j = 0; j < n; ++j) data(base + j * stride) = out[j];
      }
    }
    stride = block;
  }
}

}  // namespace

Eigen::ArrayXcd forward_transform(const PeriodicGrid& grid, const Eigen::ArrayXd& values) {
  if (values.size() != grid.size()) throw DomainError("transform input does not match the grid");
  if (grid.dim() == 1) {
    std::vector<std::complex<double>> out(grid.points());
    engine().fwd(out.data(), values.data(), grid.points());
    return Eigen::Map<Eigen::ArrayXcd>(out.data(), grid.points());
  }
  Eigen::ArrayXcd data = values.cast<std::complex<double>>();
  transform_axes(grid, data, false);
  return data;
}

Eigen::ArrayXd inverse_transform(const PeriodicGrid& grid, const Eigen::ArrayXcd& spectrum) {
  if (spectrum.size() != grid.size()) throw DomainError("transform input does not match the grid");
  if (grid.dim() == 1) {
    // Real-output inverse assumes Hermitian symmetry, which every real
    // multiplier applied to a real field preserves.
    Eigen::ArrayXd out(grid.points());
    engine().inv(out.data(), spectrum.data(), grid.points());
    return out;
  }
  Eigen::ArrayXcd data = spectrum;
  transform_axes(grid, data, true);
  return data.real();
}

Eigen::ArrayXd squared_wavenumbers(const PeriodicGrid& grid) {
  Eigen::ArrayXd k2(grid.size());
  std::vector<int> idx(grid.dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    double acc = 0.0;
    for (int m : idx) {
      const double k = signed_frequency(m, grid.points());
      acc += k * k;
    }
    k2(i) = acc;
  }
  return k2;
}

double evaluate_interpolant(const PeriodicGrid& grid, const Eigen::ArrayXcd& spectrum, const Eigen::VectorXd& x) {
  const int n = grid.points();
  const double w = 2.0 * std::numbers::pi / grid.length();
  std::vector<Eigen::ArrayXcd> phase(grid.dim(), Eigen::ArrayXcd(n));
  for (int d = 0; d < grid.dim(); ++d) {
    const double shifted = x(d) - grid.coordinate(0);
    for (int m = 0; m < n; ++m) phase[d](m) = std::polar(1.0, w * signed_frequency(m, n) * shifted);
  }
  // Contract the last axis first; each pass shrinks the array by a factor n.
  Eigen::ArrayXcd acc = spectrum;
  for (int d = grid.dim() - 1; d >= 0; --d) {
    const Eigen::Index rows = acc.size() / n;
    Eigen::ArrayXcd next(rows);
    for (Eigen::Index r = 0; r < rows; ++r) next(r) = (acc.segment(r * n, n) * phase[d]).sum();
    acc = std::move(next);
  }
  return acc(0).real() / static_cast<double>(grid.size());
}

Field dilate_field(const Field& f, double factor) {
  if (!(factor > 0.0)) throw DomainError("dilation factor must be positive");
  const auto& grid = f.grid();
  const int n = grid.points();
  const double w = 2.0 * std::numbers::pi / grid.length();
  // Row i of the 1-D interpolation matrix evaluates the interpolant at x_i / factor.
  Eigen::MatrixXcd dft(n, n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j) dft(m, j) = std::polar(1.0, -2.0 * std::numbers::pi * m * j / n);
  Eigen::MatrixXcd synth(n, n);
  for (int i = 0; i < n; ++i) {
    const double target = grid.coordinate(i) / factor - grid.coordinate(0);
    for (int m = 0; m < n; ++m) synth(i, m) = std::polar(1.0, w * signed_frequency(m, n) * target) / double(n);
  }
  const Eigen::MatrixXd interp = (synth * dft).real();

  Eigen::ArrayXd data = f.values();
  Eigen::Index stride = 1;
  Eigen::VectorXd line(n);
  for (int axis = grid.dim() - 1; axis >= 0; --axis) {
    const Eigen::Index block = stride * n;
    for (Eigen::Index outer = 0; outer < grid.size(); outer += block) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        const Eigen::Index base = outer + inner;
        for (int j = 0; j < n; ++j) line(j) = data(base + j * stride);
        const Eigen::VectorXd mapped = interp * line;
        for (int j = 0; j < n; ++j) data(base + j * stride) = mapped(j);
      }
    }
    stride = block;
  }
  return Field(grid, std::move(data));
}

Field shift_field(const Field& f, std::span<const int> cells) {
  const auto& grid = f.grid();
  Eigen::ArrayXd out(grid.size());
  std::vector<int> idx(grid.dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    for (int d = 0; d < grid.dim(); ++d) idx[d] += cells[d];
    out(grid.ravel(idx)) = f.values()(i);
  }
  return Field(grid, std::move(out));
}

}  // namespace gnsharp
