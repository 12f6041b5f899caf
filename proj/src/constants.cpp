#include "gnsharp/constants.hpp"

#include <algorithm>

namespace gnsharp {

std::vector<double> default_q_grid(double p, int points, double q_max) {
  if (points < 2) throw DomainError("q grid needs at least two points");
  const double lo = std::log(p + 1e-3), hi = std::log(q_max);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (points - 1));
  grid.front() = p + 1e-3;
  grid.back() = q_max;
  return grid;
}

Envelope c1_envelope(double p, double Q, double sphere, const std::vector<double>& q_grid) {
  if (q_grid.empty()) throw DomainError("c1_envelope needs a nonempty q grid");
  Envelope env;
  env.q_grid = q_grid;
  env.normalized.resize(q_grid.size());
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    const double q = q_grid[i];
    if (!(q > p) || !std::isfinite(q)) throw DomainError("c1_envelope grid must lie in (p, inf)");
    const GNParams<double> g{p, q, Q, sphere};
    env.normalized[i] = marcinkiewicz_gn_bound(g) / std::pow(q, 1.0 - 1.0 / p);
    if (i == 0 || env.normalized[i] > env.value) {
      env.value = env.normalized[i];
      env.argmax_index = i;
      env.argmax_q = q;
    }
  }
  const auto lo = std::min_element(q_grid.begin(), q_grid.end()) - q_grid.begin();
  const auto hi = std::max_element(q_grid.begin(), q_grid.end()) - q_grid.begin();
  env.endpoint_warning = env.argmax_index == static_cast<std::size_t>(lo) ||
                         env.argmax_index == static_cast<std::size_t>(hi);
  return env;
}

TrudingerSeries trudinger_series(double x, double p, double tol) {
  if (!(p > 1.0)) throw DomainError("trudinger series requires p > 1");
  if (!(x > 0.0)) throw DomainError("trudinger series requires x > 0");
  if (x >= 1.0 / std::numbers::e)
    throw DivergenceError("trudinger series diverges: x = p'C1^{p'}alpha = " + std::to_string(x) + " >= 1/e");
  TrudingerSeries out;
  out.x = x;
  out.first_index = static_cast<long>(std::ceil(p - 1.0 - 1e-12));
  const double lx = std::log(x);
  // Terms k^k x^k / k! in log form; the k = 0 term (0^0 = 1) never appears since p > 1.
  for (long k = out.first_index; k < out.first_index + kTrudingerTermCap; ++k) {
    const double kd = static_cast<double>(k);
    const double term = std::exp(kd * std::log(kd) - std::lgamma(kd + 1.0) + kd * lx);
    out.value += term;
    ++out.terms;
    if (term < tol * out.value) return out;
  }
  throw ConvergenceError("trudinger series did not reach tolerance within " + std::to_string(kTrudingerTermCap) +
                         " terms (x = " + std::to_string(x) + ")");
}

TwoRouteConstant best_constant_two_route(double p, double q, double mass, double d) {
  TwoRouteConstant out;
  out.from_mass = best_constant_from_mass(p, q, mass);
  out.from_d = best_constant_from_d(p, q, d);
  out.relative_gap = std::abs(out.from_mass - out.from_d) / out.from_mass;
  return out;
}

double nehari_floor(double C1, double p, double q) {
  if (!(q > p)) throw DomainError("requires q > p");
  const double pc = p / (p - 1.0);
  return std::exp(-(q * std::log(C1) + (q / pc) * std::log(q)) / (q - p));
}

ConstantsReport constants_report(double p, double q, double Q, double sphere, const std::string& quasi_norm,
                                 const std::vector<double>& q_grid) {
  const GNParams<double> g{p, q, Q, sphere};
  g.validate();
  ConstantsReport r;
  r.p = p;
  r.q = q;
  r.Q = Q;
  r.sphere = sphere;
  r.quasi_norm = quasi_norm;
  r.lambda = g.lambda();
  const auto w = weak_type_constants(g);
  r.M1 = w.M1;
  r.M2 = w.M2;
  r.theta = w.theta;
  r.marcinkiewicz_bound = marcinkiewicz_gn_bound(g);
  r.envelope = c1_envelope(p, Q, sphere, q_grid);
  const double C1 = r.envelope.value;
  r.c2_alpha_threshold = trudinger_alpha_threshold(C1, p);
  r.c2_sample_alpha = 0.5 * r.c2_alpha_threshold;
  r.c2_sample_value = trudinger_constant(r.c2_sample_alpha, C1, p);
  r.alpha_tilde = equivalence_alpha(C1, p);
  r.nehari_floor = nehari_floor(C1, p, q);
  return r;
}

}  // namespace gnsharp
