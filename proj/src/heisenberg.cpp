#include "gnsharp/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gnsharp/discretization.hpp"
#include "gnsharp/parallel.hpp"

namespace gnsharp {

HeisenbergGrid::HeisenbergGrid(double lx, double ly, double lt, int nx, int ny, int nt)
    : Lx(lx), Ly(ly), Lt(lt), Nx(nx), Ny(ny), Nt(nt) {
  if (!(lx > 0.0 && ly > 0.0 && lt > 0.0)) throw DomainError("HeisenbergGrid: half-widths must be positive");
  if (nx < 3 || ny < 3 || nt < 3) throw DomainError("HeisenbergGrid: at least 3 points per axis");
  if (size() > kDefaultPointBudget) throw DomainError("HeisenbergGrid: point budget exceeded");
}

Eigen::ArrayXd sample(const HeisenbergGrid& grid, const std::function<double(const Eigen::Vector3d&)>& f) {
  Eigen::ArrayXd out(grid.size());
  for (int i = 0; i < grid.Nx; ++i)
    for (int j = 0; j < grid.Ny; ++j)
      for (int k = 0; k < grid.Nt; ++k) out(grid.index(i, j, k)) = f(grid.point(i, j, k));
  if (!out.allFinite()) throw DomainError("sample: non-finite value");
  return out;
}

double lp_norm(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, double p) {
  return lp_norm(u, p, grid.cell_volume());
}

double inner(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, const Eigen::ArrayXd& v) {
  return pairwise_sum(u * v) * grid.cell_volume();
}

double boundary_ratio(const HeisenbergGrid& grid, const Eigen::ArrayXd& u) {
  const double m = u.abs().maxCoeff();
  if (m == 0.0) return 0.0;
  double shell = 0.0;
  for (int i = 0; i < grid.Nx; ++i)
    for (int j = 0; j < grid.Ny; ++j)
      for (int k = 0; k < grid.Nt; ++k) {
        const bool edge = i == 0 || j == 0 || k == 0 || i == grid.Nx - 1 || j == grid.Ny - 1 || k == grid.Nt - 1;
        if (edge) shell = std::max(shell, std::abs(u(grid.index(i, j, k))));
      }
  return shell / m;
}

namespace {

void check_size(const HeisenbergGrid& grid, const Eigen::ArrayXd& u) {
  if (u.size() != grid.size()) throw DomainError("array size does not match the Heisenberg grid");
}

int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }

// axis = 0 for X, 1 for Y.
Eigen::ArrayXd apply_field(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, int axis, int workers) {
  check_size(grid, u);
  Eigen::ArrayXd out(grid.size());
  const double cx = 0.5 / grid.hx(), cy = 0.5 / grid.hy(), ct = 0.5 / grid.ht();
  parallel_for(grid.Nx, workers, [&](std::size_t is) {
    const int i = static_cast<int>(is);
    const int ip = wrap(i + 1, grid.Nx), im = wrap(i - 1, grid.Nx);
    const double x = -grid.Lx + i * grid.hx();
    for (int j = 0; j < grid.Ny; ++j) {
      const int jp = wrap(j + 1, grid.Ny), jm = wrap(j - 1, grid.Ny);
      const double y = -grid.Ly + j * grid.hy();
      for (int k = 0; k < grid.Nt; ++k) {
        const int kp = wrap(k + 1, grid.Nt), km = wrap(k - 1, grid.Nt);
        const double dt = ct * (u(grid.index(i, j, kp)) - u(grid.index(i, j, km)));
        double v;
        if (axis == 0)
          v = cx * (u(grid.index(ip, j, k)) - u(grid.index(im, j, k))) - 0.5 * y * dt;
        else
          v = cy * (u(grid.index(i, jp, k)) - u(grid.index(i, jm, k))) + 0.5 * x * dt;
        out(grid.index(i, j, k)) = v;
      }
    }
  });
  return out;
}

}  // namespace

Eigen::ArrayXd apply_X(const HeisenbergGrid& grid, const Eigen::ArrayXd& u) { return apply_field(grid, u, 0, 1); }
Eigen::ArrayXd apply_Y(const HeisenbergGrid& grid, const Eigen::ArrayXd& u) { return apply_field(grid, u, 1, 1); }

Eigen::ArrayXd sublaplacian_apply(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, int workers) {
  const Eigen::ArrayXd xx = apply_field(grid, apply_field(grid, u, 0, workers), 0, workers);
  const Eigen::ArrayXd yy = apply_field(grid, apply_field(grid, u, 1, workers), 1, workers);
  return -(xx + yy);
}

namespace {

// β₀·f(T)e₁ for the Lanczos tridiagonal T with f(θ) = θ^s, f = 0 on the kernel.
Eigen::VectorXd tridiagonal_power(const std::vector<double>& alpha, const std::vector<double>& beta, double s,
                                  double beta0) {
  const Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
  Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index i = 0; i + 1 < k; ++i) sub(i) = beta[i + 1];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  // Ritz values at round-off level belong to the kernel; θ^s would inflate them.
  const double floor = kKernelCutoff * es.eigenvalues().cwiseAbs().maxCoeff();
  const Eigen::ArrayXd theta = (es.eigenvalues().array() > floor).select(es.eigenvalues().array().pow(s), 0.0);
  const Eigen::VectorXd first = es.eigenvectors().row(0).transpose();
  return beta0 * (es.eigenvectors() * (theta * first.array()).matrix());
}

}  // namespace

MatrixFunctionResult sublaplacian_power(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, double s,
                                        const LanczosConfig& config) {
  check_size(grid, u);
  if (!(s >= 0.0 && s <= 2.0)) throw DomainError("sublaplacian_power requires s in [0, 2]");
  MatrixFunctionResult res;
  if (s == 0.0) {
    res.value = u;
    return res;
  }
  if (s == 1.0 || s == 2.0) {
    res.value = sublaplacian_apply(grid, u, config.workers);
    if (s == 2.0) res.value = sublaplacian_apply(grid, res.value, config.workers);
    res.iterations = static_cast<int>(s);
    return res;
  }
  const double beta0 = u.matrix().norm();
  if (beta0 == 0.0) {
    res.value = Eigen::ArrayXd::Zero(u.size());
    return res;
  }

  // Pass 1: recurrence coefficients only.
  std::vector<double> alpha, beta{0.0};
  Eigen::ArrayXd v_prev = Eigen::ArrayXd::Zero(u.size()), v = u / beta0;
  Eigen::VectorXd y_prev;
  bool converged = false;
  std::size_t next_check = config.check_every;
  const double breakdown = 1e-13 * std::sqrt(double(u.size()));
  for (int it = 0; it < config.max_iterations; ++it) {
    Eigen::ArrayXd w = sublaplacian_apply(grid, v, config.workers);
    const double a = (w * v).sum();
    w -= a * v + beta.back() * v_prev;
    alpha.push_back(a);
    const double b = w.matrix().norm();
    const bool invariant = b <= breakdown * std::abs(a);
    // Each check costs O(k³), so checks thin out as k grows.
    if (invariant || alpha.size() >= next_check) {
      next_check = alpha.size() + std::max<std::size_t>(config.check_every, alpha.size() / 10);
      const Eigen::VectorXd y = tridiagonal_power(alpha, beta, s, beta0);
      if (y_prev.size() > 0) {
        Eigen::VectorXd padded = Eigen::VectorXd::Zero(y.size());
        padded.head(y_prev.size()) = y_prev;
        res.change = (y - padded).norm() / y.norm();
        if (res.change <= config.tolerance) converged = true;
      }
      y_prev = y;
    }
    if (converged || invariant) {
      converged = true;
      break;
    }
    beta.push_back(b);
    v_prev = std::move(v);
    v = w / b;
  }
  if (!converged)
    throw ConvergenceError("sublaplacian_power: Lanczos did not reach tolerance (last change " +
                           std::to_string(res.change) + ")");

  // Pass 2: regenerate the basis with the stored coefficients and accumulate.
  const Eigen::VectorXd y = tridiagonal_power(alpha, beta, s, beta0);
  res.value = Eigen::ArrayXd::Zero(u.size());
  v_prev.setZero();
  v = u / beta0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    res.value += y(j) * v;
    if (j + 1 == alpha.size()) break;
    Eigen::ArrayXd w = sublaplacian_apply(grid, v, config.workers);
    w -= alpha[j] * v + beta[j] * v_prev;
    v_prev = std::move(v);
    v = w / beta[j + 1];
  }
  res.iterations = static_cast<int>(alpha.size());
  return res;
}

Eigen::MatrixXd sublaplacian_dense(const HeisenbergGrid& grid) {
  if (grid.size() > 8192) throw DomainError("sublaplacian_dense: grid too large");
  const Eigen::Index n = grid.size();
  Eigen::MatrixXd m(n, n);
  Eigen::ArrayXd e = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    e(c) = 1.0;
    m.col(c) = sublaplacian_apply(grid, e).matrix();
    e(c) = 0.0;
  }
  return m;
}

double sublaplacian_pointwise(const std::function<double(const Eigen::Vector3d&)>& u, const Eigen::Vector3d& z,
                              double step) {
  auto second = [&](const Eigen::Vector3d& dir, double h) {
    auto g = [&](double e) {
      const Eigen::Vector3d w{z(0) + e * dir(0), z(1) + e * dir(1), z(2) + 0.5 * e * (z(0) * dir(1) - z(1) * dir(0))};
      return u(w);
    };
    return (-g(2 * h) + 16 * g(h) - 30 * g(0) + 16 * g(-h) - g(-2 * h)) / (12 * h * h);
  };
  auto richardson = [&](const Eigen::Vector3d& dir) {
    return (16.0 * second(dir, 0.5 * step) - second(dir, step)) / 15.0;
  };
  return -(richardson(Eigen::Vector3d::UnitX()) + richardson(Eigen::Vector3d::UnitY()));
}

namespace {

StencilError stencil_error_against(const HeisenbergGrid& grid, const std::function<double(const Eigen::Vector3d&)>& u,
                                   const std::function<double(const Eigen::Vector3d&)>& reference, int margin) {
  const Eigen::ArrayXd lu = sublaplacian_apply(grid, sample(grid, u));
  StencilError err;
  for (int i = margin; i < grid.Nx - margin; ++i)
    for (int j = margin; j < grid.Ny - margin; ++j)
      for (int k = margin; k < grid.Nt - margin; ++k) {
        const double ref = reference(grid.point(i, j, k));
        err.max_abs = std::max(err.max_abs, std::abs(lu(grid.index(i, j, k)) - ref));
        err.max_reference = std::max(err.max_reference, std::abs(ref));
      }
  return err;
}

}  // namespace

StencilError stencil_error(const HeisenbergGrid& grid, const std::function<double(const Eigen::Vector3d&)>& u,
                           int margin) {
  return stencil_error_against(grid, u, [&](const Eigen::Vector3d& z) { return sublaplacian_pointwise(u, z); },
                               margin);
}

LeftInvarianceCheck left_invariance_check(const HeisenbergGrid& grid,
                                          const std::function<double(const Eigen::Vector3d&)>& u,
                                          const Eigen::Vector3d& g) {
  const GroupDescriptor h1 = GroupDescriptor::heisenberg1();
  auto translate = [&](const Eigen::Vector3d& z) -> Eigen::Vector3d { return group_product(g, z, h1); };
  LeftInvarianceCheck out;
  out.g = g;
  out.error_base = stencil_error(grid, u).relative();
  // Reference is (𝓛u)(g·z), not 𝓛 of the translate: the two agree only by left invariance.
  out.error_translated =
      stencil_error_against(
          grid, [&](const Eigen::Vector3d& z) { return u(translate(z)); },
          [&](const Eigen::Vector3d& z) { return sublaplacian_pointwise(u, translate(z)); }, 2)
          .relative();
  out.defect = std::abs(out.error_translated - out.error_base);
  return out;
}

double HeisenbergFamily::width(int index) const {
  if (count <= 1) return w_max;
  return w_max * std::pow(w_min / w_max, static_cast<double>(index) / (count - 1));
}

Eigen::ArrayXd HeisenbergFamily::member(const HeisenbergGrid& grid, int index) const {
  if (index < 0 || index >= count) throw DomainError("family index out of range");
  const double w4 = std::pow(width(index), 4);
  return sample(grid, [&](const Eigen::Vector3d& z) {
    const double r2 = z(0) * z(0) + z(1) * z(1);
    return std::exp(-(r2 * r2 + koranyi_constant * z(2) * z(2)) / w4);
  });
}

std::string HeisenbergFamily::describe() const {
  std::ostringstream os;
  os << "koranyi_gaussians count=" << count << " width=[" << w_min << ", " << w_max << "]";
  return os.str();
}

double gn_ratio_h1(const HeisenbergGrid& grid, const Eigen::ArrayXd& f, double q, int workers) {
  if (!(q >= 2.0)) throw DomainError("gn_ratio_h1 requires q >= 2");
  const double top = lp_norm(grid, sublaplacian_apply(grid, f, workers), 2.0);
  const double base = lp_norm(grid, f, 2.0);
  if (base == 0.0) throw DomainError("gn_ratio_h1: zero field");
  return lp_norm(grid, f, q) / (std::sqrt(q) * std::pow(top, 1.0 - 2.0 / q) * std::pow(base, 2.0 / q));
}

VerificationReport empirical_gn_ratio_h1(const HeisenbergGrid& grid, const HeisenbergFamily& family, double q,
                                         int workers) {
  if (family.count <= 0) throw DomainError("empirical_gn_ratio_h1: empty family");
  VerificationReport rep;
  rep.inequality = "gn_heisenberg1";
  rep.family = family.describe();
  rep.params = {{"p", 2.0}, {"Q", 4.0}, {"q", q}, {"operator_power", 1.0}, {"haar_density", 1.0}};
  rep.ratios.resize(family.count);
  std::vector<double> widths(family.count);
  for (int i = 0; i < family.count; ++i) {
    const Eigen::ArrayXd f = family.member(grid, i);
    const double b = boundary_ratio(grid, f);
    if (b > kLocalizationThreshold)
      throw PreconditionError("empirical_gn_ratio_h1: member " + std::to_string(i) +
                              " is not localized (boundary ratio " + std::to_string(b) + ")");
    rep.ratios[i] = gn_ratio_h1(grid, f, q, workers);
    widths[i] = family.width(i);
  }
  double wide = 0.0;
  for (int i = 0; i < family.count / 2; ++i) wide = std::max(wide, rep.ratios[i]);
  rep.reference = 1.1 * wide;
  rep.tolerance = 0.0;
  rep.finalize();
  const bool finite = std::all_of(rep.ratios.begin(), rep.ratios.end(), [](double r) { return std::isfinite(r); });
  rep.pass = rep.pass && finite;
  rep.metrics["wide_half_max"] = wide;
  rep.metrics["min_ratio"] = *std::min_element(rep.ratios.begin(), rep.ratios.end());
  rep.metrics["full_over_wide"] = rep.max_ratio / wide;
  rep.series["width"] = widths;
  return rep;
}

}  // namespace gnsharp
