#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <memory>

#include "gnsharp/discretization.hpp"
#include "gnsharp/fourier.hpp"

namespace gnsharp {

/// −Δ on a periodic box as a Fourier multiplier: symbol (2π|k|/L)², degree ν = 2.
/// Cheap to copy; the symbol array is shared.
class SpectralOperator {
 public:
  explicit SpectralOperator(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const { return grid_; }
  double degree() const { return 2.0; }
  const Eigen::ArrayXd& symbol() const { return *symbol_; }
  /// symbol^s with the zero mode mapped to 1 (s = 0) or 0 (s ≠ 0).
  Eigen::ArrayXd symbol_power(double s) const;

 private:
  PeriodicGrid grid_;
  std::shared_ptr<const Eigen::ArrayXd> symbol_;
};

struct PowerInfo {
  /// True when s < 0 and the mean was discarded.
  bool zero_mode_dropped = false;
};

/// Inverse transform of symbol^s · transform(f). For s < 0 f must be mean-zero
/// (|mean| ≤ 1e-12‖f‖₂), otherwise PreconditionError.
Field apply_power(const SpectralOperator& op, const Field& f, double s, PowerInfo* info = nullptr);

/// Same multiplier applied to an already transformed field; skips the forward FFT.
Field apply_power_spectrum(const SpectralOperator& op, const Eigen::ArrayXcd& spectrum, double s);

struct SobolevNorm {
  double lp = 0.0;         ///< ‖f‖_p
  double seminorm = 0.0;   ///< ‖𝓡^{a/ν} f‖_p
  double total() const { return lp + seminorm; }
};

/// Inhomogeneous L^p_a norm with the sum convention ‖f‖_p + ‖𝓡^{a/ν}f‖_p.
SobolevNorm sobolev_norm_parts(const SpectralOperator& op, const Field& f, double a, double p);
inline double sobolev_norm(const SpectralOperator& op, const Field& f, double a, double p) {
  return sobolev_norm_parts(op, f, a, p).total();
}

struct InterpolationReport {
  double rho = 0.0;
  double theta = 0.0;
  double p = 2.0;
  /// Only the p = 2 case carries the exact ρ ≤ 1 + 1e-12 contract.
  bool contract_applies = false;
  bool contract_holds = true;
};

/// ρ = ‖𝓡^{c/ν}f‖_p / (‖𝓡^{a/ν}f‖_p^{1−θ} ‖𝓡^{b/ν}f‖_p^θ), θ = (c−a)/(b−a), a < c < b.
InterpolationReport interpolation_check(const SpectralOperator& op, const Field& f, double a, double b, double c,
                                        double p = 2.0);

/// Removes every mode whose symbol exceeds cutoff. Fields with no energy above
/// the cutoff (beyond round-off) are returned unchanged, so the projection is
/// idempotent bit for bit.
Field spectral_cutoff(const SpectralOperator& op, const Field& f,
                      double cutoff = std::numeric_limits<double>::infinity());

/// sup ‖χ_Λ f‖_∞ / ‖f‖₂ over all fields: sqrt(#{k : symbol(k) ≤ Λ} / volume),
/// attained by the Dirichlet kernel of the kept modes.
double nikolskii_constant_l2(const SpectralOperator& op, double cutoff);

/// max over `samples` seeded random fields of ‖χ_Λ f‖_∞ / ‖f‖_p.
double empirical_nikolskii_ratio(const SpectralOperator& op, double cutoff, double p, int samples,
                                 std::uint64_t seed);

}  // namespace gnsharp
