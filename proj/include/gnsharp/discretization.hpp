#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "gnsharp/errors.hpp"

namespace gnsharp {

inline constexpr Eigen::Index kDefaultPointBudget = Eigen::Index{1} << 26;

/// Periodic box [−L/2, L/2)^n with N points per axis (row-major, last axis fastest).
class PeriodicGrid {
 public:
  PeriodicGrid(int dim, double length, int points, Eigen::Index point_budget = kDefaultPointBudget);

  int dim() const { return dim_; }
  double length() const { return length_; }
  int points() const { return points_; }
  double spacing() const { return length_ / points_; }
  Eigen::Index size() const { return size_; }
  double cell_volume() const { return std::pow(spacing(), dim_); }
  double volume() const { return std::pow(length_, dim_); }
  double coordinate(int j) const { return -0.5 * length_ + j * spacing(); }

  /// Per-axis indices of a flat index.
  void unravel(Eigen::Index flat, std::span<int> index) const;
  Eigen::Index ravel(std::span<const int> index) const;

  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) {
    return a.dim_ == b.dim_ && a.length_ == b.length_ && a.points_ == b.points_;
  }

 private:
  int dim_;
  double length_;
  int points_;
  Eigen::Index size_;
};

/// Real samples on a PeriodicGrid. Construction rejects NaN/Inf.
class Field {
 public:
  Field(PeriodicGrid grid, Eigen::ArrayXd values);
  explicit Field(PeriodicGrid grid) : grid_(grid), values_(Eigen::ArrayXd::Zero(grid.size())) {}

  const PeriodicGrid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() { return values_; }
  Eigen::Index size() const { return values_.size(); }

  Field scaled(double factor) const { return Field(grid_, values_ * factor); }

 private:
  PeriodicGrid grid_;
  Eigen::ArrayXd values_;
};

/// Samples f at every grid point; f receives the point as an Eigen::VectorXd.
Field sample(const PeriodicGrid& grid, const std::function<double(const Eigen::VectorXd&)>& f);

/// Sum in a fixed binary-tree order, so the result does not depend on how
/// callers partition work.
double pairwise_sum(std::span<const double> v);

template <typename Derived>
double pairwise_sum(const Eigen::DenseBase<Derived>& v) {
  const Eigen::ArrayXd tmp = v.derived().template cast<double>().array();
  return pairwise_sum(std::span<const double>(tmp.data(), static_cast<std::size_t>(tmp.size())));
}

/// (Σ|vᵢ|^p · cell)^{1/p}, or max|vᵢ| for p = ∞. Evaluated as
/// m·(Σ(|vᵢ|/m)^p · cell)^{1/p} with m = max|vᵢ| so large p cannot overflow.
template <typename Derived>
double lp_norm(const Eigen::ArrayBase<Derived>& v, double p, double cell) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  const Eigen::ArrayXd a = v.abs();
  const double m = a.size() ? a.maxCoeff() : 0.0;
  if (std::isinf(p) || m == 0.0) return m;
  const Eigen::ArrayXd scaled = p == 2.0 ? ((a / m).square()).eval() : ((a / m).pow(p)).eval();
  return m * std::pow(pairwise_sum(scaled) * cell, 1.0 / p);
}

double lp_norm(const Field& f, double p);

/// ∫|f|^p = lp_norm^p, computed without the final root.
double lp_power(const Field& f, double p);

double integral(const Field& f);
double inner(const Field& f, const Field& g);
double mean(const Field& f);

struct SetIntegral {
  double integral = 0.0;
  double measure = 0.0;
  bool empty = true;
};

/// Σ_{x∈Ω} f(x)·hⁿ and the measure of the selected cells.
SetIntegral set_integral(const Field& f, const std::function<bool(const Eigen::VectorXd&)>& omega);

/// max over the one-cell boundary shell of |f| relative to max|f|.
double boundary_ratio(const Field& f);
inline constexpr double kLocalizationThreshold = 1e-10;
inline bool is_localized(const Field& f, double threshold = kLocalizationThreshold) {
  return boundary_ratio(f) <= threshold;
}
/// Throws PreconditionError unless f passes the localization guard.
void require_localized(const Field& f, const char* what);

}  // namespace gnsharp
