#include "gnsharp/verifier.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "gnsharp/constants.hpp"
#include "gnsharp/fourier.hpp"
#include "gnsharp/parallel.hpp"
#include "gnsharp/quadrature.hpp"
#include "gnsharp/random.hpp"

namespace gnsharp {

InequalitySetting::InequalitySetting(SpectralOperator op_, GroupDescriptor group_, double p_)
    : op(std::move(op_)), group(std::move(group_)), p(p_) {
  group.validate();
  if (!(p > 1.0) || !std::isfinite(p)) throw HypothesisError("requires 1 < p < inf");
  if (group.kind != GroupKind::euclidean) throw HypothesisError("spectral checks run on euclidean groups");
  if (group.dimension() != op.grid().dim()) throw HypothesisError("grid dimension does not match the group");
}

InequalitySetting::InequalitySetting(const VariationalProblem& prob)
    : InequalitySetting(prob.op(), prob.group(), prob.p()) {}

void VerificationReport::finalize() {
  max_ratio = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
  pass = max_ratio <= reference * (1.0 + tolerance);
}


// ---- GN ----

std::vector<double> default_verify_q_grid(double p, int points, double q_max) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = p * std::pow(q_max / p, static_cast<double>(i) / (points - 1));
  grid.front() = p;
  grid.back() = q_max;
  return grid;
}

std::vector<double> gn_ratios(const InequalitySetting& set, const Field& f, const std::vector<double>& q_grid) {
  const double p = set.p;
  const double top = lp_norm(apply_power(set.op, f, set.critical_power()), p);
  const double base = lp_norm(f, p);
  if (base == 0.0) throw DomainError("gn_ratios: zero field");
  std::vector<double> out(q_grid.size());
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    const double q = q_grid[i];
    if (!(q >= p)) throw DomainError("gn_ratios requires q >= p");
    const double lq = lp_norm(f, q);
    // top^{1−p/q} with top = 0 only happens for constants; the ratio is then infinite.
    out[i] = lq / (std::pow(q, 1.0 - 1.0 / p) * std::pow(top, 1.0 - p / q) * std::pow(base, p / q));
  }
  return out;
}

VerificationReport verify_gn(const InequalitySetting& set, const TestFamily& family, double C1,
                             const std::vector<double>& q_grid, int workers) {
  if (family.count <= 0) throw DomainError("verify_gn: empty family");
  VerificationReport rep;
  rep.inequality = "gn";
  rep.family = family.describe();
  rep.params = {{"p", set.p}, {"Q", set.Q()}, {"q_min", q_grid.front()}, {"q_max", q_grid.back()}};
  rep.reference = C1;
  rep.tolerance = 1e-10;
  const std::size_t n = family.count;
  std::vector<std::vector<double>> per(n);
  std::vector<char> zero(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    const Field f = family.member(set.grid(), static_cast<int>(i));
    if (f.values().abs().maxCoeff() == 0.0) {
      zero[i] = 1;
      return;
    }
    require_localized(f, "verify_gn");
    per[i] = gn_ratios(set, f, q_grid);
  });
  std::vector<double> by_q(q_grid.size(), 0.0);
  std::vector<double> argmax_q;
  for (std::size_t i = 0; i < n; ++i) {
    if (zero[i]) {
      rep.warnings.push_back("member " + std::to_string(i) + " is zero; skipped");
      continue;
    }
    const auto it = std::max_element(per[i].begin(), per[i].end());
    rep.ratios.push_back(*it);
    argmax_q.push_back(q_grid[it - per[i].begin()]);
    for (std::size_t k = 0; k < q_grid.size(); ++k) by_q[k] = std::max(by_q[k], per[i][k]);
  }
  // Empirical lim sup: max over the top decade of the q grid.
  double b = 0.0;
  const double q_top = *std::max_element(q_grid.begin(), q_grid.end());
  for (std::size_t k = 0; k < q_grid.size(); ++k)
    if (q_grid[k] >= q_top / 10.0) b = std::max(b, by_q[k]);
  rep.metrics["B_estimate"] = b;
  rep.series["q_grid"] = q_grid;
  rep.series["max_by_q"] = by_q;
  rep.series["argmax_q"] = argmax_q;
  rep.finalize();
  std::size_t violations = 0;
  for (double r : rep.ratios) violations += r > C1 * (1.0 + rep.tolerance);
  rep.metrics["violations"] = static_cast<double>(violations);
  return rep;
}

// ---- Trudinger ----

double trudinger_lhs(const Field& f, double alpha, double p) {
  if (!(alpha > 0.0) || !(p > 1.0)) throw DomainError("trudinger_lhs requires alpha > 0, p > 1");
  const double pc = p / (p - 1.0);
  const long k0 = static_cast<long>(std::ceil(p - 1.0 - 1e-12));
  const Eigen::ArrayXd& v = f.values();
  Eigen::ArrayXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double y = alpha * std::pow(std::abs(v(i)), pc);
    if (y == 0.0) {
      out(i) = 0.0;
      continue;
    }
    double term = std::exp(k0 * std::log(y) - std::lgamma(k0 + 1.0));
    double sum = term;
    for (long k = k0 + 1; term > 1e-12 * sum; ++k) {
      term *= y / static_cast<double>(k);
      sum += term;
    }
    out(i) = sum;
  }
  return pairwise_sum(out) * f.grid().cell_volume();
}

double trudinger_lhs_direct_p2(const Field& f, double alpha) {
  const Eigen::ArrayXd y = alpha * f.values().square();
  Eigen::ArrayXd e(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) e(i) = std::expm1(y(i));
  return pairwise_sum(e) * f.grid().cell_volume();
}

namespace {

struct NormalizedMember {
  Field f;
  double lp_power_value;
};

std::vector<NormalizedMember> trudinger_members(const InequalitySetting& set, const TestFamily& family, int workers,
                                                std::vector<std::string>& warnings) {
  std::vector<std::optional<NormalizedMember>> tmp(family.count);
  parallel_for(family.count, workers, [&](std::size_t i) {
    const Field f = family.member(set.grid(), static_cast<int>(i));
    const double top = lp_norm(apply_power(set.op, f, set.critical_power()), set.p);
    if (top == 0.0) return;
    Field g = f.scaled(1.0 / top);
    const double lp = lp_power(g, set.p);
    tmp[i] = NormalizedMember{std::move(g), lp};
  });
  std::vector<NormalizedMember> out;
  for (std::size_t i = 0; i < tmp.size(); ++i) {
    if (tmp[i])
      out.push_back(std::move(*tmp[i]));
    else
      warnings.push_back("member " + std::to_string(i) + " has zero critical seminorm; skipped");
  }
  return out;
}

double trudinger_max_ratio(const std::vector<NormalizedMember>& members, double alpha, double p, int workers,
                           std::vector<double>* ratios) {
  std::vector<double> r(members.size());
  parallel_for(members.size(), workers, [&](std::size_t i) {
    r[i] = trudinger_lhs(members[i].f, alpha, p) / members[i].lp_power_value;
  });
  if (ratios) *ratios = r;
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

}  // namespace

VerificationReport verify_trudinger(const InequalitySetting& set, const TestFamily& family, double alpha, double C1,
                                    int workers) {
  if (family.count <= 0) throw DomainError("verify_trudinger: empty family");
  const double x = trudinger_argument(alpha, C1, set.p);
  if (x >= 1.0 / std::numbers::e)
    throw HypothesisError("alpha is past the series threshold: p'C1^{p'}alpha = " + std::to_string(x) + " >= 1/e");
  VerificationReport rep;
  rep.inequality = "trudinger";
  rep.family = family.describe();
  rep.params = {{"p", set.p}, {"Q", set.Q()}, {"alpha", alpha}, {"C1", C1}, {"x", x}};
  rep.reference = trudinger_constant(alpha, C1, set.p);
  rep.tolerance = 1e-12;
  const auto members = trudinger_members(set, family, workers, rep.warnings);
  trudinger_max_ratio(members, alpha, set.p, workers, &rep.ratios);
  rep.finalize();
  rep.metrics["slack"] = rep.max_ratio > 0.0 ? rep.reference / rep.max_ratio : std::numeric_limits<double>::infinity();
  return rep;
}

AlphaBisection max_passing_alpha(const InequalitySetting& set, const TestFamily& family, double C1, int steps,
                                 int workers) {
  std::vector<std::string> warnings;
  const auto members = trudinger_members(set, family, workers, warnings);
  const double p = set.p;
  auto passes = [&](double alpha) {
    const double c2 = trudinger_constant(alpha, C1, p);
    return trudinger_max_ratio(members, alpha, p, workers, nullptr) <= c2 * (1.0 + 1e-12);
  };
  AlphaBisection out;
  // Keeps e·x ≤ 0.999, where the series still converges within the term cap.
  out.alpha_ceiling = trudinger_alpha_threshold(C1, p) * 0.999;
  out.ceiling_passes = passes(out.alpha_ceiling);
  if (out.ceiling_passes) {
    out.alpha_max = out.alpha_ceiling;
    return out;
  }
  double lo = out.alpha_ceiling * 1e-12, hi = out.alpha_ceiling;
  if (!passes(lo)) return out;
  for (; out.steps < steps; ++out.steps) {
    const double mid = std::sqrt(lo * hi);
    (passes(mid) ? lo : hi) = mid;
  }
  out.alpha_max = lo;
  return out;
}

// ---- BGW ----

VerificationReport verify_bgw(const InequalitySetting& set, const TestFamily& family, const BGWOptions& opts,
                              int workers) {
  if (family.count <= 0) throw DomainError("verify_bgw: empty family");
  const double Q = set.Q(), p = set.p, nu = set.op.degree();
  if (!(opts.q > 1.0)) throw HypothesisError("requires 1 < q < inf");
  if (!(opts.a > Q / opts.q)) throw HypothesisError("requires a > Q/q");
  const double branch = opts.a - Q / opts.q;
  const bool split = branch >= 1.0;
  const double a0 = Q / opts.q + 0.5;
  const double pc = set.p_conj();

  const std::size_t n = family.count;
  std::vector<double> r(n), rq(n), sob(n), low_inf(n), high_inf(n), high_ratio(n), nik(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const Field f = family.member(set.grid(), static_cast<int>(i));
    sob[i] = sobolev_norm(set.op, f, Q / p, p);
    const Field g = f.scaled(1.0 / sob[i]);
    const double inf = lp_norm(g, std::numeric_limits<double>::infinity());
    rq[i] = lp_norm(apply_power(set.op, g, opts.a / nu), opts.q);
    r[i] = inf / std::pow(1.0 + std::log1p(rq[i]), 1.0 / pc);
    if (split) {
      const Field low = spectral_cutoff(set.op, g, opts.split_cutoff);
      const Field high(set.grid(), g.values() - low.values());
      low_inf[i] = lp_norm(low, std::numeric_limits<double>::infinity());
      high_inf[i] = lp_norm(high, std::numeric_limits<double>::infinity());
      const double hq = lp_norm(apply_power(set.op, high, a0 / nu), opts.q);
      high_ratio[i] = high_inf[i] / std::pow(1.0 + std::log1p(hq), 1.0 / pc);
      nik[i] = low_inf[i] / lp_norm(g, p);
    }
  });

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rq[x] < rq[y]; });
  double lower = 0.0, upper = 0.0;
  for (std::size_t k = 0; k < n; ++k) (k < n / 2 ? lower : upper) = std::max(k < n / 2 ? lower : upper, r[order[k]]);

  VerificationReport rep;
  rep.inequality = "bgw";
  rep.family = family.describe();
  rep.params = {{"p", p}, {"Q", Q}, {"a", opts.a}, {"q", opts.q}, {"a_minus_Q_over_q", branch}};
  rep.ratios = r;
  rep.reference = 1.1 * lower;
  rep.tolerance = 0.0;
  rep.finalize();
  rep.metrics["lower_half_max"] = lower;
  rep.metrics["upper_half_max"] = upper;
  rep.metrics["full_over_lower"] = rep.max_ratio / lower;
  rep.metrics["upper_over_full"] = upper / rep.max_ratio;
  rep.metrics["max_seminorm"] = *std::max_element(rq.begin(), rq.end());
  rep.metrics["branch"] = split ? 2.0 : 1.0;
  rep.series["seminorm_aq"] = rq;
  rep.series["sobolev_norm_before_scaling"] = sob;
  if (split) {
    rep.params["split_cutoff"] = opts.split_cutoff;
    rep.params["a0"] = a0;
    rep.series["split_low_inf"] = low_inf;
    rep.series["split_high_inf"] = high_inf;
    rep.series["split_high_ratio_a0"] = high_ratio;
    rep.series["split_low_inf_over_lp"] = nik;
    if (p == 2.0) rep.metrics["nikolskii_l2_constant"] = nikolskii_constant_l2(set.op, opts.split_cutoff);
  }
  return rep;
}

// ---- BW set estimate ----

double ball_integral_abs(const Field& f, const Eigen::VectorXd& center, double radius, int radial_nodes) {
  const auto& grid = f.grid();
  const Eigen::ArrayXcd spec = forward_transform(grid, f.values());
  const GaussLegendreRule rule(radial_nodes);
  if (grid.dim() == 1) {
    Eigen::VectorXd x(1);
    return rule.integrate([&](double t) {
      x(0) = center(0) + t;
      return std::abs(evaluate_interpolant(grid, spec, x));
    }, -radius, radius);
  }
  if (grid.dim() == 2) {
    const int angles = 4 * radial_nodes;
    Eigen::VectorXd x(2);
    return rule.integrate([&](double r) {
      double ring = 0.0;
      for (int k = 0; k < angles; ++k) {
        const double th = 2.0 * std::numbers::pi * k / angles;
        x(0) = center(0) + r * std::cos(th);
        x(1) = center(1) + r * std::sin(th);
        ring += std::abs(evaluate_interpolant(grid, spec, x));
      }
      return ring * (2.0 * std::numbers::pi / angles) * r;
    }, 0.0, radius);
  }
  throw DomainError("ball_integral_abs supports dimensions 1 and 2");
}

std::vector<double> radii_for_measures(const GroupDescriptor& g, double sphere, double omega_min, double omega_max,
                                       int count) {
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i) {
    const double omega = omega_min * std::pow(omega_max / omega_min, count > 1 ? double(i) / (count - 1) : 0.0);
    r[i] = std::pow(g.Q * omega / sphere, 1.0 / g.Q);
  }
  return r;
}

VerificationReport verify_bw_set(const InequalitySetting& set, const Field& f, const std::vector<double>& radii,
                                 double C4) {
  require_localized(f, "verify_bw_set");
  const double p = set.p, Q = set.Q(), pc = set.p_conj();
  const double sphere = sphere_measure(set.group).value;
  const double sob = sobolev_norm(set.op, f, Q / p, p);
  Eigen::Index imax;
  f.values().abs().maxCoeff(&imax);
  std::vector<int> idx(set.grid().dim());
  set.grid().unravel(imax, idx);
  Eigen::VectorXd center(set.grid().dim());
  for (int d = 0; d < set.grid().dim(); ++d) center(d) = set.grid().coordinate(idx[d]);

  VerificationReport rep;
  rep.inequality = "bw";
  rep.family = "single field";
  rep.params = {{"p", p}, {"Q", Q}, {"sobolev_norm", sob}, {"sphere", sphere}};
  rep.reference = C4;
  rep.tolerance = 0.0;
  std::vector<double> omegas, integrals, branches;
  for (double r : radii) {
    const double omega = sphere * std::pow(r, Q) / Q;
    if (!(omega > 0.0)) {
      rep.warnings.push_back("radius " + std::to_string(r) + " gives an empty set; skipped");
      continue;
    }
    const double integral = ball_integral_abs(f, center, r);
    omegas.push_back(omega);
    integrals.push_back(integral);
    branches.push_back(omega > std::exp(-p) ? 1.0 : 2.0);
    rep.ratios.push_back(integral / (sob * omega * std::pow(1.0 + std::abs(std::log(omega)), 1.0 / pc)));
  }
  rep.finalize();
  rep.series["measure"] = omegas;
  rep.series["integral"] = integrals;
  rep.series["branch"] = branches;
  return rep;
}

BWCalibration calibrate_bw(const InequalitySetting& set, const TestFamily& family, double c1_envelope,
                           double omega_min, int workers) {
  BWCalibration cal;
  cal.p = set.p;
  cal.Q = set.Q();
  cal.omega_min = omega_min;
  cal.family = family.describe();
  const double q_top = std::max(set.p * 1.0001, std::log(1.0 / omega_min));
  const auto grid = default_verify_q_grid(set.p, 16, q_top);
  std::vector<double> best(family.count, 0.0);
  parallel_for(family.count, workers, [&](std::size_t i) {
    const auto r = gn_ratios(set, family.member(set.grid(), static_cast<int>(i)), grid);
    best[i] = *std::max_element(r.begin(), r.end());
  });
  cal.c1_empirical = *std::max_element(best.begin(), best.end());
  cal.c4 = std::numbers::e * std::max(1.0, cal.c1_empirical);
  cal.c4_theory = std::numbers::e * std::max(1.0, c1_envelope);
  return cal;
}

// ---- Hölder ----

namespace {

struct Displacement {
  std::vector<int> cells;
  double length;
};

Displacement sample_displacement(const PeriodicGrid& grid, std::uint64_t seed, int i) {
  Rng rng(mix_seed(seed, i));
  const double h = grid.spacing();
  const double r = rng.log_uniform(2.0 * h, grid.length() / 4.0);
  Eigen::VectorXd dir(grid.dim());
  for (int d = 0; d < grid.dim(); ++d) dir(d) = rng.normal();
  if (dir.norm() == 0.0) dir(0) = 1.0;
  dir.normalize();
  Displacement out;
  out.cells.resize(grid.dim());
  double len2 = 0.0;
  for (int d = 0; d < grid.dim(); ++d) {
    out.cells[d] = static_cast<int>(std::lround(r * dir(d) / h));
    len2 += double(out.cells[d]) * out.cells[d];
  }
  if (len2 == 0.0) {
    out.cells[0] = 2;
    len2 = 4.0;
  }
  out.length = h * std::sqrt(len2);
  return out;
}

// Flat index of x + cells for every x, built axis by axis.
std::vector<Eigen::Index> shifted_indices(const PeriodicGrid& grid, const std::vector<int>& cells) {
  std::vector<Eigen::Index> out(grid.size());
  std::vector<int> idx(grid.dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    for (int d = 0; d < grid.dim(); ++d) idx[d] += cells[d];
    out[i] = grid.ravel(idx);
  }
  return out;
}

double quotient_for(const Field& f, const Displacement& y, double alpha) {
  const auto& v = f.values();
  const auto fwd = shifted_indices(f.grid(), y.cells);
  double best = 0.0;
  if (alpha < 1.0) {
    for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(fwd[i]) - v(i)));
    return best / std::pow(y.length, alpha);
  }
  std::vector<int> neg(y.cells.size());
  for (std::size_t d = 0; d < neg.size(); ++d) neg[d] = -y.cells[d];
  const auto back = shifted_indices(f.grid(), neg);
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(fwd[i]) + v(back[i]) - 2.0 * v(i)));
  return best / y.length;
}

std::vector<double> quotients(const Field& f, double alpha, int count, std::uint64_t seed) {
  std::vector<double> q(count);
  for (int i = 0; i < count; ++i) q[i] = quotient_for(f, sample_displacement(f.grid(), seed, i), alpha);
  return q;
}

}  // namespace

std::vector<HolderSample> holder_samples(const Field& f, double alpha, int pair_count, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("holder_samples requires 0 < alpha <= 1");
  std::vector<HolderSample> out(pair_count);
  for (int i = 0; i < pair_count; ++i) {
    const Displacement y = sample_displacement(f.grid(), seed, i);
    out[i] = {y.length, quotient_for(f, y, alpha)};
  }
  return out;
}

double holder_seminorm(const Field& f, double alpha, int pair_count, std::uint64_t seed,
                       std::vector<std::string>* warnings) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("holder_seminorm requires 0 < alpha <= 1");
  if (pair_count < 1) throw DomainError("holder_seminorm requires pair_count >= 1");
  if (pair_count < 100 && warnings)
    warnings->push_back("pair_count " + std::to_string(pair_count) + " < 100: low statistical power");
  const auto q = quotients(f, alpha, pair_count, seed);
  return *std::max_element(q.begin(), q.end());
}

VerificationReport verify_holder_lemma(const InequalitySetting& set, const TestFamily& family, double alpha,
                                       int pair_count, std::uint64_t seed, int workers) {
  const double Q = set.Q(), p = set.p;
  const double lambda = alpha + Q / p;
  if (!(alpha > 0.0 && alpha <= 1.0)) throw HypothesisError("requires 0 < alpha <= 1");
  if (!(lambda > 0.0 && lambda < Q)) throw HypothesisError("requires 0 < lambda = alpha + Q/p < Q");
  VerificationReport rep;
  rep.inequality = "holder";
  rep.family = family.describe();
  rep.params = {{"p", p}, {"Q", Q}, {"alpha", alpha}, {"lambda", lambda}, {"pair_count", double(pair_count)}};
  if (pair_count < 100) rep.warnings.push_back("pair_count " + std::to_string(pair_count) + " < 100: low statistical power");
  const std::size_t n = family.count;
  std::vector<double> single(n), doubled(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const Field f = family.member(set.grid(), static_cast<int>(i));
    const Field f0(set.grid(), f.values() - mean(f));
    const Field tf = apply_power(set.op, f0, -lambda / set.op.degree());
    const double norm = lp_norm(f0, p);
    // The first pair_count displacements are shared, so the doubled sample is a superset.
    const auto q = quotients(tf, alpha, 2 * pair_count, seed);
    single[i] = *std::max_element(q.begin(), q.begin() + pair_count) / norm;
    doubled[i] = *std::max_element(q.begin(), q.end()) / norm;
  });
  const double max_single = *std::max_element(single.begin(), single.end());
  rep.ratios = doubled;
  rep.reference = max_single;
  rep.tolerance = 0.05;
  rep.finalize();
  rep.metrics["max_single"] = max_single;
  rep.metrics["max_doubled"] = rep.max_ratio;
  rep.metrics["relative_change"] = rep.max_ratio / max_single - 1.0;
  rep.series["ratios_single"] = single;
  return rep;
}

}  // namespace gnsharp
