#include "gnsharp/spectral_operator.hpp"

#include <algorithm>
#include <numbers>

#include "gnsharp/random.hpp"

namespace gnsharp {

SpectralOperator::SpectralOperator(const PeriodicGrid& grid) : grid_(grid) {
  const double w = 2.0 * std::numbers::pi / grid.length();
  symbol_ = std::make_shared<const Eigen::ArrayXd>(squared_wavenumbers(grid) * (w * w));
}

Eigen::ArrayXd SpectralOperator::symbol_power(double s) const {
  const Eigen::ArrayXd& sym = *symbol_;
  if (s == 0.0) return Eigen::ArrayXd::Ones(sym.size());
  Eigen::ArrayXd out(sym.size());
  for (Eigen::Index i = 0; i < sym.size(); ++i) out(i) = sym(i) > 0.0 ? std::pow(sym(i), s) : 0.0;
  return out;
}

Field apply_power_spectrum(const SpectralOperator& op, const Eigen::ArrayXcd& spectrum, double s) {
  if (s == 0.0) return Field(op.grid(), inverse_transform(op.grid(), spectrum));
  const Eigen::ArrayXcd scaled = spectrum * op.symbol_power(s).cast<std::complex<double>>();
  return Field(op.grid(), inverse_transform(op.grid(), scaled));
}

Field apply_power(const SpectralOperator& op, const Field& f, double s, PowerInfo* info) {
  if (!(f.grid() == op.grid())) throw DomainError("apply_power: field and operator grids differ");
  if (info) info->zero_mode_dropped = false;
  if (s == 0.0) return f;
  if (s < 0.0) {
    const double m = mean(f);
    if (std::abs(m) > 1e-12 * lp_norm(f, 2.0))
      throw PreconditionError("apply_power: negative powers need a mean-zero field");
    if (info) info->zero_mode_dropped = true;
  }
  return apply_power_spectrum(op, forward_transform(op.grid(), f.values()), s);
}

SobolevNorm sobolev_norm_parts(const SpectralOperator& op, const Field& f, double a, double p) {
  if (!(a >= 0.0)) throw DomainError("sobolev_norm requires a >= 0");
  if (!(p > 1.0)) throw DomainError("sobolev_norm requires p > 1");
  SobolevNorm out;
  out.lp = lp_norm(f, p);
  out.seminorm = a == 0.0 ? out.lp : lp_norm(apply_power(op, f, a / op.degree()), p);
  return out;
}

InterpolationReport interpolation_check(const SpectralOperator& op, const Field& f, double a, double b, double c,
                                        double p) {
  if (!(a < c && c < b)) throw DomainError("interpolation_check requires a < c < b");
  const double nu = op.degree();
  InterpolationReport out;
  out.p = p;
  out.theta = (c - a) / (b - a);
  const double na = lp_norm(apply_power(op, f, a / nu), p);
  const double nb = lp_norm(apply_power(op, f, b / nu), p);
  const double nc = lp_norm(apply_power(op, f, c / nu), p);
  if (na == 0.0 || nb == 0.0) throw DomainError("interpolation_check: field is zero on the spectral support");
  out.rho = nc / (std::pow(na, 1.0 - out.theta) * std::pow(nb, out.theta));
  out.contract_applies = p == 2.0;
  out.contract_holds = !out.contract_applies || out.rho <= 1.0 + 1e-12;
  return out;
}

Field spectral_cutoff(const SpectralOperator& op, const Field& f, double cutoff) {
  if (!(cutoff >= 0.0)) throw DomainError("spectral_cutoff requires a nonnegative cutoff");
  const Eigen::ArrayXd& sym = op.symbol();
  if (cutoff >= sym.maxCoeff()) return f;
  Eigen::ArrayXcd spec = forward_transform(op.grid(), f.values());
  const double peak = spec.abs().maxCoeff();
  double removed = 0.0;
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    if (sym(i) > cutoff) {
      removed = std::max(removed, std::abs(spec(i)));
      spec(i) = 0.0;
    }
  }
  // Residual high modes at the FFT round-off level mean f is already in the range.
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::sqrt(double(spec.size())) * peak;
  if (removed <= roundoff) return f;
  return Field(op.grid(), inverse_transform(op.grid(), spec));
}

double nikolskii_constant_l2(const SpectralOperator& op, double cutoff) {
  const auto kept = (op.symbol() <= cutoff).count();
  return std::sqrt(static_cast<double>(kept) / op.grid().volume());
}

double empirical_nikolskii_ratio(const SpectralOperator& op, double cutoff, double p, int samples,
                                 std::uint64_t seed) {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng(mix_seed(seed, i));
    Eigen::ArrayXd v(op.grid().size());
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.normal();
    const Field f(op.grid(), v);
    const Field low = spectral_cutoff(op, f, cutoff);
    best = std::max(best, lp_norm(low, std::numeric_limits<double>::infinity()) / lp_norm(f, p));
  }
  return best;
}

}  // namespace gnsharp
