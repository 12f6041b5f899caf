#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gnsharp/errors.hpp"

namespace gnsharp {

/// Exponents of the critical GN problem: 1 < p <= q < ∞, Q > 0, sphere = |℘| > 0.
template <typename Real = double>
struct GNParams {
  Real p = 2;
  Real q = 4;
  Real Q = 2;
  Real sphere = 2 * std::numbers::pi_v<Real>;

  Real p_conj() const { return p / (p - 1); }
  Real lambda() const { return Q * (1 / p - 1 / q); }

  void validate() const {
    if (!(p > 1)) throw DomainError("requires p > 1");
    if (!(q >= p) || !std::isfinite(static_cast<double>(q))) throw DomainError("requires p <= q < inf");
    if (!(Q > 0)) throw DomainError("requires Q > 0");
    if (!(sphere > 0)) throw DomainError("requires |S| > 0");
  }
};

template <typename Real>
struct KernelNorms {
  Real inner_l1;      ///< ‖K¹‖₁, K¹ = |x|^{λ−Q} on {|x| < s}
  Real outer_dual;    ///< ‖K²‖_{p̃′}, K² = |x|^{λ−Q} on {|x| ≥ s}
};

/// Closed-form norms of the two halves of the Riesz kernel |x|^{λ−Q} split at radius s.
template <typename Real>
KernelNorms<Real> kernel_split_norms(Real lambda, Real s, Real pt, Real Q, Real sphere) {
  using std::pow;
  if (!(lambda > 0 && lambda < Q)) throw DomainError("kernel split requires 0 < lambda < Q");
  if (!(s > 0)) throw DomainError("kernel split requires s > 0");
  if (!(pt >= 1)) throw DomainError("kernel split requires p~ >= 1");
  // ∫_{|x|≥s} |x|^{(λ−Q)p̃′} is finite iff λ < Q/p̃, which is also 1/q̃ > 0.
  if (!(lambda * pt < Q)) throw DomainError("outer kernel is not in L^{p~'}: requires lambda < Q/p~");
  KernelNorms<Real> out;
  out.inner_l1 = sphere * pow(s, lambda) / lambda;
  if (pt == 1) {
    out.outer_dual = pow(s, lambda - Q);
  } else {
    const Real qt = 1 / (1 / pt - lambda / Q);
    const Real ptc = pt / (pt - 1);
    out.outer_dual = pow(sphere * qt / (Q * ptc), 1 / ptc) * pow(s, lambda - Q / pt);
  }
  return out;
}

template <typename Real>
struct WeakTypeConstants {
  Real M1, M2, theta;
  Real p1, q1, p2, q2;
};

template <typename Real>
WeakTypeConstants<Real> weak_type_constants(const GNParams<Real>& g) {
  using std::pow;
  g.validate();
  if (!(g.q > g.p)) throw DomainError("weak-type constants require q > p");
  const Real p = g.p, q = g.q, Q = g.Q, S = g.sphere;
  WeakTypeConstants<Real> w;
  w.p1 = 1;
  w.q1 = 1 / (1 - 1 / p + 1 / q);
  w.p2 = 1 / (1 / p - 1 / q + 1 / (q + 1));
  w.q2 = q + 1;
  w.theta = (1 - 1 / p) / (1 - 1 / p + 1 / q - 1 / (q + 1));
  w.M1 = pow(S * w.q1 / (Q * (w.q1 - 1)), 1 / w.q1);
  const Real p2 = w.p2, q2 = w.q2;
  const Real num = pow(S * q2 / Q, 1 - 1 / p2 + 1 / q2) * pow(p2 - 1, (p2 - 1) * (q2 - p2) / (p2 * q2));
  const Real den = pow(p2, 1 - 1 / p2 - (2 * p2 - 1) / q2) * pow(q2 - p2, p2 / q2);
  w.M2 = num / den;
  return w;
}

/// 4·(q + (pq−q+p)/(q(p−1)))^{1/q}·M₁^{1−θ}·M₂^θ.
template <typename Real>
Real marcinkiewicz_gn_bound(const GNParams<Real>& g) {
  using std::pow;
  const auto w = weak_type_constants(g);
  const Real p = g.p, q = g.q;
  return 4 * pow(q + (p * q - q + p) / (q * (p - 1)), 1 / q) * pow(w.M1, 1 - w.theta) * pow(w.M2, w.theta);
}

/// Limits of M₁(q) and q^{1/p−1}M₂(q) as q → ∞.
template <typename Real>
Real m1_limit(const GNParams<Real>& g) {
  return std::pow(g.sphere * g.p / g.Q, 1 - 1 / g.p);
}
template <typename Real>
Real m2_scaled_limit(const GNParams<Real>& g) {
  return std::pow(g.sphere * (g.p - 1) / (g.Q * g.p), 1 - 1 / g.p);
}

/// 400-point log grid on (p + 1e-3, 1e4).
std::vector<double> default_q_grid(double p, int points = 400, double q_max = 1e4);

struct Envelope {
  double value = 0.0;
  double argmax_q = 0.0;
  std::size_t argmax_index = 0;
  /// Sup attained at the first or last grid point: the value is only a grid bound.
  bool endpoint_warning = false;
  std::vector<double> q_grid;
  std::vector<double> normalized;  ///< bound(q)/q^{1−1/p} per grid point
};

/// sup over q_grid of marcinkiewicz_gn_bound(q)/q^{1−1/p}.
Envelope c1_envelope(double p, double Q, double sphere, const std::vector<double>& q_grid);
inline Envelope c1_envelope(double p, double Q, double sphere) {
  return c1_envelope(p, Q, sphere, default_q_grid(p));
}

struct TrudingerSeries {
  double value = 0.0;
  double x = 0.0;          ///< p′C₁^{p′}α
  long first_index = 0;    ///< ⌈p−1⌉
  long terms = 0;
};

inline constexpr double kTrudingerTolerance = 1e-12;
inline constexpr long kTrudingerTermCap = 100000;

/// x = p′C₁^{p′}α.
inline double trudinger_argument(double alpha, double C1, double p) {
  const double pc = p / (p - 1.0);
  return pc * std::pow(C1, pc) * alpha;
}
/// Largest α with x < 1/e.
inline double trudinger_alpha_threshold(double C1, double p) {
  const double pc = p / (p - 1.0);
  return 1.0 / (std::numbers::e * pc * std::pow(C1, pc));
}

/// Σ_{k≥⌈p−1⌉} k^k/k!·x^k by partial sums until the term drops below tol·sum.
/// DivergenceError if x ≥ 1/e, ConvergenceError after kTrudingerTermCap terms.
TrudingerSeries trudinger_series(double x, double p, double tol = kTrudingerTolerance);
inline double trudinger_constant(double alpha, double C1, double p, double tol = kTrudingerTolerance) {
  if (!(alpha > 0.0) || !(C1 > 0.0) || !(p > 1.0)) throw DomainError("trudinger_constant requires alpha, C1 > 0, p > 1");
  return trudinger_series(trudinger_argument(alpha, C1, p), p, tol).value;
}

/// α̃ = 1/(e·p′·A^{p′}) and its inverse A = (1/(e p′ α̃))^{1/p′}.
template <typename Real>
Real equivalence_alpha(Real A, Real p) {
  if (!(A > 0) || !(p > 1)) throw DomainError("equivalence_alpha requires A > 0, p > 1");
  const Real pc = p / (p - 1);
  return 1 / (std::numbers::e_v<Real> * pc * std::pow(A, pc));
}
template <typename Real>
Real equivalence_A(Real alpha, Real p) {
  if (!(alpha > 0) || !(p > 1)) throw DomainError("equivalence_A requires alpha > 0, p > 1");
  const Real pc = p / (p - 1);
  return std::pow(1 / (std::numbers::e_v<Real> * pc * alpha), 1 / pc);
}

/// C_GN = q^{−q+q/p}·(q/p)·((q−p)/p)^{(p−q)/p}·mass^{(p−q)/p}, mass = ‖φ‖_p^p.
template <typename Real>
Real best_constant_from_mass(Real p, Real q, Real mass) {
  using std::pow;
  if (!(p > 1)) throw DomainError("requires p > 1");
  if (!(q > p)) throw DomainError("requires q > p");
  if (!(mass > 0)) throw DomainError("requires mass > 0");
  const Real e = (p - q) / p;
  return pow(q, -q + q / p) * (q / p) * pow((q - p) / p, e) * pow(mass, e);
}

/// Same constant with the mass taken from the least energy: mass = p²d/(q−p).
template <typename Real>
Real best_constant_from_d(Real p, Real q, Real d) {
  if (!(q > p)) throw DomainError("requires q > p");
  return best_constant_from_mass(p, q, p * p * d / (q - p));
}

struct TwoRouteConstant {
  double from_mass = 0.0;
  double from_d = 0.0;
  double relative_gap = 0.0;
};
TwoRouteConstant best_constant_two_route(double p, double q, double mass, double d);

/// Everything closed-form for one (p, q, Q, |℘|).
struct ConstantsReport {
  double p = 0.0, q = 0.0, Q = 0.0, sphere = 0.0;
  std::string quasi_norm;
  double lambda = 0.0;
  double M1 = 0.0, M2 = 0.0, theta = 0.0;
  double marcinkiewicz_bound = 0.0;
  Envelope envelope;
  /// C₂(α) is finite for α < alpha_threshold; sampled at half the threshold.
  double c2_alpha_threshold = 0.0;
  double c2_sample_alpha = 0.0;
  double c2_sample_value = 0.0;
  /// α̃ from A = c1_envelope (an upper bound on A, so α̃ is a lower bound).
  double alpha_tilde = 0.0;
  /// Lower bound for ‖u‖ on the Nehari set with C₁ = c1_envelope.
  double nehari_floor = 0.0;
};

ConstantsReport constants_report(double p, double q, double Q, double sphere, const std::string& quasi_norm,
                                 const std::vector<double>& q_grid);
inline ConstantsReport constants_report(double p, double q, double Q, double sphere, const std::string& quasi_norm) {
  return constants_report(p, q, Q, sphere, quasi_norm, default_q_grid(p));
}

/// κ = (C₁^q·q^{q/p′})^{−1/(q−p)}: ‖u‖_{L^p_{Q/p}} ≥ κ on the Nehari set.
double nehari_floor(double C1, double p, double q);

}  // namespace gnsharp
