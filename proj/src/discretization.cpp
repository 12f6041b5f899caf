#include "gnsharp/discretization.hpp"

#include <string>

namespace gnsharp {

PeriodicGrid::PeriodicGrid(int dim, double length, int points, Eigen::Index point_budget)
    : dim_(dim), length_(length), points_(points), size_(1) {
  if (dim < 1) throw DomainError("grid dimension must be >= 1");
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid length must be positive");
  if (points < 8 || (points & (points - 1)) != 0)
    throw DomainError("points per axis must be a power of two and at least 8");
  for (int d = 0; d < dim; ++d) {
    if (size_ > point_budget / points)
      throw DomainError("grid of " + std::to_string(points) + "^" + std::to_string(dim) +
                        " points exceeds the memory budget");
    size_ *= points;
  }
}

void PeriodicGrid::unravel(Eigen::Index flat, std::span<int> index) const {
  for (int d = dim_ - 1; d >= 0; --d) {
    index[d] = static_cast<int>(flat % points_);
    flat /= points_;
  }
}

Eigen::Index PeriodicGrid::ravel(std::span<const int> index) const {
  Eigen::Index flat = 0;
  for (int d = 0; d < dim_; ++d) flat = flat * points_ + ((index[d] % points_) + points_) % points_;
  return flat;
}

Field::Field(PeriodicGrid grid, Eigen::ArrayXd values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DomainError("field size does not match its grid");
  if (!values_.allFinite()) throw DomainError("field values must be finite");
}

Field sample(const PeriodicGrid& grid, const std::function<double(const Eigen::VectorXd&)>& f) {
  Eigen::ArrayXd values(grid.size());
  std::vector<int> idx(grid.dim());
  Eigen::VectorXd x(grid.dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    for (int d = 0; d < grid.dim(); ++d) x(d) = grid.coordinate(idx[d]);
    values(i) = f(x);
  }
  return Field(grid, std::move(values));
}

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kLeaf = 64;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double lp_norm(const Field& f, double p) { return lp_norm(f.values(), p, f.grid().cell_volume()); }

double lp_power(const Field& f, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("lp_power requires finite p >= 1");
  const Eigen::ArrayXd a = p == 2.0 ? f.values().square().eval() : f.values().abs().pow(p).eval();
  return pairwise_sum(a) * f.grid().cell_volume();
}

double integral(const Field& f) { return pairwise_sum(f.values()) * f.grid().cell_volume(); }

double inner(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw DomainError("inner product of fields on different grids");
  return pairwise_sum((f.values() * g.values()).eval()) * f.grid().cell_volume();
}

double mean(const Field& f) { return integral(f) / f.grid().volume(); }

SetIntegral set_integral(const Field& f, const std::function<bool(const Eigen::VectorXd&)>& omega) {
  const auto& grid = f.grid();
  std::vector<double> selected;
  std::vector<int> idx(grid.dim());
  Eigen::VectorXd x(grid.dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    for (int d = 0; d < grid.dim(); ++d) x(d) = grid.coordinate(idx[d]);
    if (omega(x)) selected.push_back(f.values()(i));
  }
  SetIntegral out;
  out.empty = selected.empty();
  if (out.empty) return out;
  out.integral = pairwise_sum(selected) * grid.cell_volume();
  out.measure = static_cast<double>(selected.size()) * grid.cell_volume();
  return out;
}

double boundary_ratio(const Field& f) {
  const auto& grid = f.grid();
  const double m = f.values().abs().maxCoeff();
  if (m == 0.0) return 0.0;
  double shell = 0.0;
  std::vector<int> idx(grid.dim());
  const int last = grid.points() - 1;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    bool on_shell = false;
    for (int v : idx) on_shell = on_shell || v == 0 || v == last;
    if (on_shell) shell = std::max(shell, std::abs(f.values()(i)));
  }
  return shell / m;
}

void require_localized(const Field& f, const char* what) {
  const double r = boundary_ratio(f);
  if (r > kLocalizationThreshold)
    throw PreconditionError(std::string(what) + ": field is not localized (boundary ratio " + std::to_string(r) +
                            " > 1e-10)");
}

}  // namespace gnsharp
