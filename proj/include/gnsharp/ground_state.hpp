#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gnsharp/discretization.hpp"
#include "gnsharp/group_model.hpp"
#include "gnsharp/spectral_operator.hpp"

namespace gnsharp {

/// Whether construction rejects p > Q/γ. `relaxed` keeps the problem but marks it.
enum class HypothesisPolicy { enforce, relaxed };

/// 𝓡^{2s}-type equation 𝓡^s(|𝓡^s u|^{p−2}𝓡^s u) + |u|^{p−2}u = |u|^{q−2}u with s = Q/(νp).
class VariationalProblem {
 public:
  VariationalProblem(SpectralOperator op, GroupDescriptor group, double p, double q,
                     HypothesisPolicy policy = HypothesisPolicy::enforce);

  const SpectralOperator& op() const { return op_; }
  const GroupDescriptor& group() const { return group_; }
  const PeriodicGrid& grid() const { return op_.grid(); }
  double p() const { return p_; }
  double q() const { return q_; }
  double s() const { return s_; }
  double Q() const { return group_.Q; }
  /// True when p > Q/γ was accepted under HypothesisPolicy::relaxed.
  bool outside_hypotheses() const { return outside_; }

 private:
  SpectralOperator op_;
  GroupDescriptor group_;
  double p_, q_, s_;
  bool outside_ = false;
};

/// A = ‖𝓡^s u‖_p^p, B = ‖u‖_p^p, C = ‖u‖_q^q.
struct NormTerms {
  double A = 0.0, B = 0.0, C = 0.0;
  /// ‖u‖_{L^p_{Q/p}}^p in the p-power convention A + B.
  double sobolev_p() const { return A + B; }
};

NormTerms norm_terms(const VariationalProblem& prob, const Field& u);

double energy_L(const VariationalProblem& prob, const Field& u);
double nehari_I(const VariationalProblem& prob, const Field& u);
inline double energy_L(const VariationalProblem& prob, const NormTerms& t) {
  return t.A / prob.p() + t.B / prob.p() - t.C / prob.q();
}
inline double nehari_I(const NormTerms& t) { return t.A + t.B - t.C; }

struct NehariProjection {
  double mu = 0.0;
  Field scaled;
  /// |ℑ(μu)| / ‖μu‖_q^q after scaling.
  double relative_defect = 0.0;
};

/// μ_u = (A+B)^{1/(q−p)}·C^{−1/(q−p)}, the unique μ with ℑ(μu) = 0.
NehariProjection nehari_project(const VariationalProblem& prob, const Field& u);

/// q^{q−q/p}·‖𝓡^s u‖_p^{q−p}·‖u‖_p^p / ‖u‖_q^q.
double weinstein_J(const VariationalProblem& prob, const Field& u);
double weinstein_J(const VariationalProblem& prob, const NormTerms& t);

enum class SolverMethod { automatic, petviashvili, descent };

struct SolverConfig {
  SolverMethod method = SolverMethod::automatic;
  /// Euler–Lagrange tolerance; 0 picks 1e-8 for p = 2 and 1e-6 otherwise.
  double tol_pde = 0.0;
  double tol_id = 1e-3;
  int max_iterations = 4000;
  /// Gaussian widths for the initial guesses, as multiples of the decay length.
  std::vector<double> restart_widths{1.0, 0.7, 1.4};
  int workers = 1;
  /// Fail with ConvergenceError when a run ends above tol_pde.
  bool require_convergence = true;
};

struct GroundStateResult {
  Field phi;
  double p = 0.0, q = 0.0, s = 0.0, Q = 0.0;
  NormTerms terms;
  double d = 0.0;
  double mass = 0.0;
  /// Relative residuals of A = ((q−p)/p)B, C = (q/p)B, B = p²d/(q−p).
  std::array<double, 3> identity_residuals{};
  double c_gn = 0.0;             ///< 1/J(φ)
  double c_gn_from_mass = 0.0;
  double c_gn_from_d = 0.0;
  double two_route_gap = 0.0;    ///< |from_mass − from_d|/from_mass
  double j_route_gap = 0.0;      ///< |c_gn − from_mass|/from_mass
  /// C_GN^{1/q}: the constant of the unpowered form ‖u‖_q ≤ C·q^{1−1/p}·‖𝓡^s u‖^{1−p/q}‖u‖^{p/q}.
  double c1_unpowered = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string method;
  int restart = 0;
  double width = 0.0;
  double boundary_ratio = 0.0;
  /// min over Nehari-projected iterates of ‖u‖_{L^p_{Q/p}}/κ.
  double nehari_floor_margin = 0.0;
  double nehari_floor = 0.0;
  bool outside_hypotheses = false;
};

/// Least-energy solution. Runs one solve per restart width (in parallel) and
/// keeps the lowest d.
GroundStateResult solve(const VariationalProblem& prob, const SolverConfig& config = {});

/// Result fields recomputed for a given φ (used by solve, exposed for tests).
GroundStateResult analyze(const VariationalProblem& prob, const Field& phi);

/// Euler–Lagrange residual ‖𝓡^s(|𝓡^sφ|^{p−2}𝓡^sφ) + |φ|^{p−2}φ − |φ|^{q−2}φ‖₂ / ‖|φ|^{p−2}φ‖₂.
double euler_lagrange_residual(const VariationalProblem& prob, const Field& phi);

struct TRhoResult {
  double value = 0.0;
  Field minimizer;
  int iterations = 0;
};

/// inf{ ‖u‖_{L^p_{Q/p}}^p : ‖u‖_q^q = ρ } by descent with projection onto the q-sphere.
TRhoResult t_rho(const VariationalProblem& prob, double rho, const SolverConfig& config = {});

std::string to_string(SolverMethod m);

}  // namespace gnsharp
