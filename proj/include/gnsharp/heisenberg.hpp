#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "gnsharp/group_model.hpp"
#include "gnsharp/verifier.hpp"

namespace gnsharp {

/// Periodic box [−Lx, Lx)×[−Ly, Ly)×[−Lt, Lt) on H¹ with (Nx, Ny, Nt) points,
/// row-major with t fastest. Vector fields X = ∂x − (y/2)∂t, Y = ∂y + (x/2)∂t.
struct HeisenbergGrid {
  double Lx = 1.0, Ly = 1.0, Lt = 1.0;
  int Nx = 2, Ny = 2, Nt = 2;

  HeisenbergGrid() = default;
  HeisenbergGrid(double lx, double ly, double lt, int nx, int ny, int nt);

  double hx() const { return 2.0 * Lx / Nx; }
  double hy() const { return 2.0 * Ly / Ny; }
  double ht() const { return 2.0 * Lt / Nt; }
  Eigen::Index size() const { return Eigen::Index(Nx) * Ny * Nt; }
  double cell_volume() const { return hx() * hy() * ht(); }
  Eigen::Index index(int i, int j, int k) const { return (Eigen::Index(i) * Ny + j) * Nt + k; }
  Eigen::Vector3d point(int i, int j, int k) const {
    return {-Lx + i * hx(), -Ly + j * hy(), -Lt + k * ht()};
  }
  friend bool operator==(const HeisenbergGrid&, const HeisenbergGrid&) = default;
};

/// Samples f(x, y, t) on every grid point.
Eigen::ArrayXd sample(const HeisenbergGrid& grid, const std::function<double(const Eigen::Vector3d&)>& f);

double lp_norm(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, double p);
double inner(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, const Eigen::ArrayXd& v);
/// max |u| on the one-cell boundary shell relative to max |u|.
double boundary_ratio(const HeisenbergGrid& grid, const Eigen::ArrayXd& u);

/// Xu and Yu by centered differences with periodic wrap. Both are exactly
/// antisymmetric, so XᵀX + YᵀY is symmetric and nonnegative.
Eigen::ArrayXd apply_X(const HeisenbergGrid& grid, const Eigen::ArrayXd& u);
Eigen::ArrayXd apply_Y(const HeisenbergGrid& grid, const Eigen::ArrayXd& u);

/// 𝓛u = −(X² + Y²)u.
Eigen::ArrayXd sublaplacian_apply(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, int workers = 1);

/// Eigenvalues below this fraction of the largest count as exact zeros of 𝓛
/// (constants and the checkerboard modes of the centered stencil).
inline constexpr double kKernelCutoff = 1e-10;

struct LanczosConfig {
  double tolerance = 1e-8;
  int max_iterations = 3000;
  int check_every = 5;
  int workers = 1;
};

struct MatrixFunctionResult {
  Eigen::ArrayXd value;
  int iterations = 0;
  double change = 0.0;  ///< last relative change between checks
};

/// 𝓛^s u for s ∈ [0, 2]. Integer powers apply the stencil directly; other
/// powers run Lanczos twice (coefficients, then the basis regenerated) so the
/// Krylov basis is never stored. Throws ConvergenceError past max_iterations.
MatrixFunctionResult sublaplacian_power(const HeisenbergGrid& grid, const Eigen::ArrayXd& u, double s,
                                        const LanczosConfig& config = {});

/// 𝓛 as a dense matrix (small grids only; reference for tests).
Eigen::MatrixXd sublaplacian_dense(const HeisenbergGrid& grid);

/// Pointwise −(d²/dε² u(z·(ε,0,0)) + d²/dε² u(z·(0,ε,0))) at ε = 0, from a
/// Richardson-extrapolated five-point rule along the one-parameter subgroups.
double sublaplacian_pointwise(const std::function<double(const Eigen::Vector3d&)>& u, const Eigen::Vector3d& z,
                              double step = 1e-2);

struct StencilError {
  double max_abs = 0.0;
  double max_reference = 0.0;
  double relative() const { return max_reference > 0.0 ? max_abs / max_reference : max_abs; }
};

/// Discrete 𝓛 against sublaplacian_pointwise on points at least `margin` cells
/// away from the boundary.
StencilError stencil_error(const HeisenbergGrid& grid, const std::function<double(const Eigen::Vector3d&)>& u,
                           int margin = 2);

struct LeftInvarianceCheck {
  Eigen::Vector3d g;
  double error_base = 0.0;        ///< stencil error of 𝓛_h u
  double error_translated = 0.0;  ///< stencil error of 𝓛_h(u∘L_g) against (𝓛u)∘L_g
  double defect = 0.0;            ///< |error_translated − error_base|
};

/// Compares the discrete 𝓛 on u and on its left translate z ↦ u(g·z).
LeftInvarianceCheck left_invariance_check(const HeisenbergGrid& grid,
                                          const std::function<double(const Eigen::Vector3d&)>& u,
                                          const Eigen::Vector3d& g);

/// Korányi-Gaussian exp(−((x²+y²)² + 16t²)/w⁴), widths geometric from w_max down
/// to w_min (so members concentrate).
struct HeisenbergFamily {
  int count = 20;
  double w_min = 1.0;
  double w_max = 1.6;
  double koranyi_constant = 16.0;

  double width(int index) const;
  Eigen::ArrayXd member(const HeisenbergGrid& grid, int index) const;
  std::string describe() const;
};

/// ρ(f, q) = ‖f‖_q / (q^{1/2}·‖𝓛f‖₂^{1−2/q}·‖f‖₂^{2/q}) (p = 2, Q = 4).
double gn_ratio_h1(const HeisenbergGrid& grid, const Eigen::ArrayXd& f, double q, int workers = 1);

/// ρ over the family at one q; pass iff every ratio is finite and the max over
/// the family is within 10% of the max over its wider half.
VerificationReport empirical_gn_ratio_h1(const HeisenbergGrid& grid, const HeisenbergFamily& family, double q,
                                         int workers = 1);

}  // namespace gnsharp
