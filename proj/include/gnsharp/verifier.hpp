#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gnsharp/families.hpp"
#include "gnsharp/ground_state.hpp"
#include "gnsharp/group_model.hpp"
#include "gnsharp/spectral_operator.hpp"

namespace gnsharp {

/// Operator, group and Lebesgue exponent shared by the inequality checks. Unlike
/// VariationalProblem it carries no q and no p ≤ Q/γ requirement.
struct InequalitySetting {
  SpectralOperator op;
  GroupDescriptor group;
  double p = 2.0;

  InequalitySetting(SpectralOperator op, GroupDescriptor group, double p);
  explicit InequalitySetting(const VariationalProblem& prob);

  double Q() const { return group.Q; }
  double p_conj() const { return p / (p - 1.0); }
  /// Q/(νp): the power of 𝓡 in the critical seminorm.
  double critical_power() const { return group.Q / (op.degree() * p); }
  const PeriodicGrid& grid() const { return op.grid(); }
};

struct VerificationReport {
  std::string inequality;
  std::string family;
  std::map<std::string, double> params;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  /// max_ratio ≤ reference·(1 + tolerance).
  bool pass = false;
  std::map<std::string, double> metrics;
  std::map<std::string, std::vector<double>> series;
  std::vector<std::string> warnings;

  void finalize();
};

// ---- critical Gagliardo–Nirenberg ----

/// ρ(f, q) = ‖f‖_q / (q^{1−1/p}·‖𝓡^{Q/νp}f‖_p^{1−p/q}·‖f‖_p^{p/q}) on each q of q_grid.
std::vector<double> gn_ratios(const InequalitySetting& set, const Field& f, const std::vector<double>& q_grid);

/// 32-point log grid on [p, 1e4] (p itself included).
std::vector<double> default_verify_q_grid(double p, int points = 32, double q_max = 1e4);

/// Per-member max over q of ρ(f, q) against C1. metrics: B_estimate (max over
/// the top decade of the q grid), per-q maxima in series["max_by_q"].
VerificationReport verify_gn(const InequalitySetting& set, const TestFamily& family, double C1,
                             const std::vector<double>& q_grid, int workers = 1);

// ---- Trudinger ----

/// ∫ (exp(α|f|^{p′}) − Σ_{k<p−1} (α|f|^{p′})^k/k!) dx, series summed termwise to 1e-12.
double trudinger_lhs(const Field& f, double alpha, double p);
/// Same integral for p = 2 through expm1, without the series.
double trudinger_lhs_direct_p2(const Field& f, double alpha);

/// Each member is scaled to ‖𝓡^{Q/νp}f‖_p = 1; ratio lhs/‖f‖_p^p against C2.
/// Throws HypothesisError when α is past the divergence threshold of C1.
VerificationReport verify_trudinger(const InequalitySetting& set, const TestFamily& family, double alpha, double C1,
                                    int workers = 1);

struct AlphaBisection {
  double alpha_max = 0.0;     ///< largest α found passing
  double alpha_ceiling = 0.0; ///< search upper end (just below the series threshold)
  bool ceiling_passes = false;
  int steps = 0;
};

/// Largest α for which verify_trudinger passes, by bisection on (0, ceiling).
AlphaBisection max_passing_alpha(const InequalitySetting& set, const TestFamily& family, double C1, int steps = 40,
                                 int workers = 1);

// ---- Brezis–Gallouet–Wainger ----

struct BGWOptions {
  double a = 1.5;
  double q = 2.0;
  /// Cutoff used for the low/high split report in the a − Q/q ≥ 1 branch.
  double split_cutoff = 0.0;
};

/// r(f) = ‖f‖_∞/(1 + log(1 + ‖𝓡^{a/ν}f‖_q))^{1/p′} with ‖f‖_{L^p_{Q/p}} = 1.
/// pass iff max over the family ≤ 1.1 × max over the half with lower ‖𝓡^{a/ν}f‖_q.
VerificationReport verify_bgw(const InequalitySetting& set, const TestFamily& family, const BGWOptions& opts,
                              int workers = 1);

// ---- Brezis–Wainger set estimate ----

/// ∫_{B(center, r)} |f| from Gauss quadrature of the trigonometric interpolant
/// (polar in 2-D, plain in 1-D), so balls far below the grid spacing are resolved.
double ball_integral_abs(const Field& f, const Eigen::VectorXd& center, double radius, int radial_nodes = 24);

/// Per radius: ∫_Ω|f| / (‖f‖_{L^p_{Q/p}}·|Ω|·(1 + |log|Ω||)^{1/p′}) with Ω the ball
/// around argmax|f| and |Ω| = |℘|r^Q/Q, against C4.
VerificationReport verify_bw_set(const InequalitySetting& set, const Field& f, const std::vector<double>& radii,
                                 double C4);

/// Radii for which |Ω| spans [omega_min, omega_max] log-uniformly.
std::vector<double> radii_for_measures(const GroupDescriptor& g, double sphere, double omega_min, double omega_max,
                                       int count);

struct BWCalibration {
  double p = 0.0, Q = 0.0;
  /// max ρ(f, q) over the calibration family and q ∈ [p, log(1/omega_min)].
  double c1_empirical = 0.0;
  double c4 = 0.0;         ///< e·max(1, c1_empirical)
  double c4_theory = 0.0;  ///< e·max(1, c1_envelope)
  double omega_min = 0.0;
  std::string family;
};

/// The proof's two branches give ∫_Ω|f| ≤ e·max(1, C₁)·‖f‖·|Ω|(1+|log|Ω||)^{1/p′};
/// C₁ is replaced by its empirical value on the calibration family.
BWCalibration calibrate_bw(const InequalitySetting& set, const TestFamily& family, double c1_envelope,
                           double omega_min, int workers = 1);

// ---- Hölder seminorm lemma ----

/// max over sampled grid-aligned displacements y (|y| log-uniform in [2h, L/4]),
/// each scanned over every base point x, of |f(x+y) − f(x)|/|y|^α for α < 1, or
/// |f(x+y) + f(x−y) − 2f(x)|/|y| for α = 1. pair_count counts displacements.
double holder_seminorm(const Field& f, double alpha, int pair_count, std::uint64_t seed,
                       std::vector<std::string>* warnings = nullptr);

struct HolderSample {
  double length = 0.0;    ///< |y|
  double quotient = 0.0;  ///< max over x for this y
};
/// The per-displacement maxima behind holder_seminorm, in sampling order.
std::vector<HolderSample> holder_samples(const Field& f, double alpha, int pair_count, std::uint64_t seed);

/// For f in the family (made mean-zero): holder_seminorm(𝓡^{−λ/ν}f, α)/‖f‖_p with
/// λ = α + Q/p, at pair_count and 2·pair_count. pass iff the doubled max stays
/// within 5% of the single max.
VerificationReport verify_holder_lemma(const InequalitySetting& set, const TestFamily& family, double alpha,
                                       int pair_count, std::uint64_t seed, int workers = 1);

}  // namespace gnsharp
