#include "gnsharp/ground_state.hpp"

#include <algorithm>
#include <exception>
#include <numbers>

#include "gnsharp/constants.hpp"
#include "gnsharp/fourier.hpp"
#include "gnsharp/parallel.hpp"

namespace gnsharp {

namespace {

using Spectrum = Eigen::ArrayXcd;

// |u|^{e−1}·sign(u), i.e. |u|^{e−2}u without dividing by zero.
Eigen::ArrayXd signed_power(const Eigen::ArrayXd& u, double e) {
  if (e == 2.0) return u;
  if (e == 3.0) return u * u.abs();
  if (e == 4.0) return u * u.square();
  return u.sign() * u.abs().pow(e - 1.0);
}

double power_sum(const Eigen::ArrayXd& u, double e, double cell) {
  if (e == 2.0) return pairwise_sum(u.square().eval()) * cell;
  if (e == 4.0) return pairwise_sum(u.square().square().eval()) * cell;
  return pairwise_sum(u.abs().pow(e).eval()) * cell;
}

// Everything one descent or fixed-point step needs about an iterate.
struct Evaluation {
  Eigen::ArrayXd u;
  Spectrum u_hat;
  Eigen::ArrayXd rs_u;  // 𝓡^s u
  NormTerms t;
};

Evaluation evaluate(const VariationalProblem& prob, Eigen::ArrayXd u) {
  const auto& grid = prob.grid();
  Evaluation ev;
  ev.u_hat = forward_transform(grid, u);
  ev.rs_u = apply_power_spectrum(prob.op(), ev.u_hat, prob.s()).values();
  const double cell = grid.cell_volume();
  ev.t.A = power_sum(ev.rs_u, prob.p(), cell);
  ev.t.B = power_sum(u, prob.p(), cell);
  ev.t.C = power_sum(u, prob.q(), cell);
  ev.u = std::move(u);
  return ev;
}

// log E with E = (A+B)^{q/(q−p)}·C^{−p/(q−p)}, the Nehari-reduced energy up to (1/p − 1/q).
double log_reduced_energy(const VariationalProblem& prob, const NormTerms& t) {
  const double p = prob.p(), q = prob.q();
  return (q * std::log(t.sobolev_p()) - p * std::log(t.C)) / (q - p);
}

// L²(dx) gradients of A, B, C, in that order.
struct Gradients {
  Eigen::ArrayXd gA, gB, gC;
};

Gradients gradients(const VariationalProblem& prob, const Evaluation& ev) {
  const double p = prob.p(), q = prob.q();
  Gradients g;
  if (p == 2.0) {
    g.gA = 2.0 * apply_power_spectrum(prob.op(), ev.u_hat, 2.0 * prob.s()).values();
  } else {
    const Field w(prob.grid(), signed_power(ev.rs_u, p));
    g.gA = p * apply_power(prob.op(), w, prob.s()).values();
  }
  g.gB = p * signed_power(ev.u, p);
  g.gC = q * signed_power(ev.u, q);
  return g;
}

double el_residual(const VariationalProblem& prob, const Evaluation& ev) {
  const Gradients g = gradients(prob, ev);
  const double p = prob.p(), q = prob.q();
  const Eigen::ArrayXd r = g.gA / p + g.gB / p - g.gC / q;
  const double denom = std::sqrt(pairwise_sum((g.gB / p).square().eval()));
  return std::sqrt(pairwise_sum(r.square().eval())) / denom;
}

Eigen::ArrayXd precondition(const VariationalProblem& prob, const Eigen::ArrayXd& g) {
  const Spectrum gh = forward_transform(prob.grid(), g);
  const Eigen::ArrayXd m = prob.op().symbol_power(2.0 * prob.s()) + 1.0;
  return inverse_transform(prob.grid(), gh / m.cast<std::complex<double>>());
}

enum class Projection { nehari, q_sphere };

Eigen::ArrayXd project(const VariationalProblem& prob, const Evaluation& ev, Projection proj, double rho) {
  const double p = prob.p(), q = prob.q();
  const double mu = proj == Projection::nehari ? std::pow(ev.t.sobolev_p() / ev.t.C, 1.0 / (q - p))
                                               : std::pow(rho / ev.t.C, 1.0 / q);
  return ev.u * mu;
}

struct RunOutcome {
  Eigen::ArrayXd u;
  int iterations = 0;
  double residual = 0.0;
  double floor_margin = std::numeric_limits<double>::infinity();
};

void check_floor(const VariationalProblem& prob, const NormTerms& t, double kappa, RunOutcome& out) {
  // ‖μ_u u‖_{L^p_{Q/p}} = E(u)^{1/p}, so the floor is checked without rescaling.
  const double norm = std::exp(log_reduced_energy(prob, t) / prob.p());
  out.floor_margin = std::min(out.floor_margin, norm / kappa);
  if (norm < 0.5 * kappa)
    throw ConvergenceError("iterate collapsed below half the Nehari floor (norm " + std::to_string(norm) +
                           ", floor " + std::to_string(kappa) + ")");
}

RunOutcome run_petviashvili(const VariationalProblem& prob, Eigen::ArrayXd u, double tol, int max_iter,
                            double kappa) {
  const auto& grid = prob.grid();
  const double q = prob.q();
  const double gamma = (q - 1.0) / (q - 2.0);
  const Eigen::ArrayXcd m = (prob.op().symbol_power(2.0 * prob.s()) + 1.0).cast<std::complex<double>>();
  const double parseval = grid.cell_volume() / static_cast<double>(grid.size());
  RunOutcome out;
  Spectrum u_hat = forward_transform(grid, u);
  for (int it = 0; it <= max_iter; ++it) {
    const Eigen::ArrayXd nl = signed_power(u, q);
    const Spectrum n_hat = forward_transform(grid, nl);
    const Spectrum mu_hat = m * u_hat;
    const double uu = pairwise_sum(u_hat.abs2().eval());
    out.residual = std::sqrt(pairwise_sum((mu_hat - n_hat).abs2().eval()) / uu);
    out.iterations = it;
    NormTerms t;
    t.B = uu * parseval;
    t.A = pairwise_sum((mu_hat * u_hat.conjugate()).real().eval()) * parseval - t.B;
    t.C = power_sum(u, q, grid.cell_volume());
    check_floor(prob, t, kappa, out);
    if (out.residual <= tol) break;
    if (it == max_iter) break;
    const double num = pairwise_sum((mu_hat * u_hat.conjugate()).real().eval());
    const double den = pairwise_sum((n_hat * u_hat.conjugate()).real().eval());
    if (!(den > 0.0)) throw ConvergenceError("spectral renormalization lost positivity");
    const double S = num / den;
    u_hat = std::pow(S, gamma) * n_hat / m;
    u = inverse_transform(grid, u_hat);
    if (!u.allFinite()) throw ConvergenceError("spectral renormalization produced non-finite values");
  }
  out.u = std::move(u);
  return out;
}

RunOutcome run_descent(const VariationalProblem& prob, Eigen::ArrayXd u, Projection proj, double rho, double tol,
                       int max_iter, double kappa) {
  const double p = prob.p(), q = prob.q();
  const double ca = q / (q - p), cc = p / (q - p);
  const double cell = prob.grid().cell_volume();
  // Gradient of log E; E is 0-homogeneous, so this is orthogonal to u.
  auto grad = [&](const Evaluation& e) -> Eigen::ArrayXd {
    const Gradients gr = gradients(prob, e);
    return ca * (gr.gA + gr.gB) / e.t.sobolev_p() - cc * gr.gC / e.t.C;
  };
  auto dot = [&](const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) { return pairwise_sum((a * b).eval()) * cell; };

  RunOutcome out;
  Evaluation ev = evaluate(prob, std::move(u));
  ev = evaluate(prob, project(prob, ev, proj, rho));
  Eigen::ArrayXd g = grad(ev);
  double f = log_reduced_energy(prob, ev.t);
  Eigen::ArrayXd dir, g_old, pg_old;
  double step = 1.0;
  for (int it = 0; it <= max_iter; ++it) {
    out.iterations = it;
    check_floor(prob, ev.t, kappa, out);
    if (proj == Projection::nehari) {
      // On the Nehari set the EL residual is a multiple of the gradient of log E.
      const Eigen::ArrayXd r = g * (ev.t.C * (q - p) / (p * q));
      out.residual = std::sqrt(pairwise_sum(r.square().eval()) / pairwise_sum(signed_power(ev.u, p).square().eval()));
    } else {
      const double mu = std::pow(ev.t.sobolev_p() / ev.t.C, 1.0 / (q - p));
      out.residual = el_residual(prob, evaluate(prob, ev.u * mu));
    }
    if (out.residual <= tol || it == max_iter) break;

    const Eigen::ArrayXd pg = precondition(prob, g);
    if (dir.size() == 0) {
      dir = -pg;
    } else {
      const double beta = std::max(0.0, dot(g - g_old, pg) / dot(g_old, pg_old));
      dir = -pg + beta * dir;
    }
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      dir = -pg;
      slope = dot(g, dir);
    }
    if (!(slope < 0.0)) break;

    // Line search on the directional derivative (secant with bracketing). Function
    // values alone stop resolving progress once the residual nears 1e-8.
    double a = 0.0, da = slope, b = std::numeric_limits<double>::infinity(), db = 0.0;
    double t = step;
    bool accepted = false;
    Evaluation trial;
    Eigen::ArrayXd g_trial;
    for (int ls = 0; ls < 40; ++ls) {
      trial = evaluate(prob, ev.u + t * dir);
      const bool finite = trial.t.C > 0.0 && std::isfinite(trial.t.A) && std::isfinite(trial.t.C);
      double dt = 0.0;
      bool overshoot = !finite;
      if (finite) {
        const double ft = log_reduced_energy(prob, trial.t);
        g_trial = grad(trial);
        dt = dot(g_trial, dir);
        overshoot = ft > f + 1e-10 * std::max(1.0, std::abs(f));
        if (!overshoot && std::abs(dt) <= 0.5 * std::abs(slope)) {
          accepted = true;
          break;
        }
      }
      if (overshoot || dt > 0.0) {
        b = t;
        db = overshoot ? std::abs(slope) : dt;
      } else {
        a = t;
        da = dt;
      }
      if (std::isinf(b)) {
        t *= 4.0;
      } else {
        double ts = a - da * (b - a) / (db - da);
        const double lo = a + 0.1 * (b - a), hi = b - 0.1 * (b - a);
        t = std::clamp(ts, lo, hi);
      }
    }
    if (!accepted) break;
    step = t;
    g_old = g;
    pg_old = pg;
    const double mu = proj == Projection::nehari ? std::pow(trial.t.sobolev_p() / trial.t.C, 1.0 / (q - p))
                                                 : std::pow(rho / trial.t.C, 1.0 / q);
    ev = evaluate(prob, trial.u * mu);
    // ∇ log E is homogeneous of degree −1.
    g = g_trial / mu;
    f = log_reduced_energy(prob, ev.t);
  }
  out.u = std::move(ev.u);
  return out;
}

double decay_length(const VariationalProblem&) {
  // The linearization 𝓡^{2s}u + u = 0 (p = 2) and its p-form decay on the unit
  // length scale for every s.
  return 1.0;
}

Eigen::ArrayXd gaussian_guess(const PeriodicGrid& grid, double width) {
  return sample(grid, [&](const Eigen::VectorXd& x) { return std::exp(-0.5 * x.squaredNorm() / (width * width)); })
      .values();
}

double problem_nehari_floor(const VariationalProblem& prob) {
  const SphereMeasure sm = sphere_measure(prob.group());
  const Envelope env = c1_envelope(prob.p(), prob.Q(), sm.value);
  return nehari_floor(env.value, prob.p(), prob.q());
}

}  // namespace

VariationalProblem::VariationalProblem(SpectralOperator op, GroupDescriptor group, double p, double q,
                                       HypothesisPolicy policy)
    : op_(std::move(op)), group_(std::move(group)), p_(p), q_(q) {
  group_.validate();
  if (!(p > 1.0)) throw HypothesisError("requires p > 1");
  if (!(q > p) || !std::isfinite(q)) throw HypothesisError("requires q > p");
  if (group_.kind != GroupKind::euclidean)
    throw HypothesisError("the spectral solver is defined on euclidean groups only");
  if (group_.dimension() != op_.grid().dim())
    throw HypothesisError("grid dimension does not match the group dimension");
  if (p > group_.Q / group_.gamma + 1e-12) {
    if (policy == HypothesisPolicy::enforce)
      throw HypothesisError("requires p <= Q/gamma (p = " + std::to_string(p) +
                            ", Q/gamma = " + std::to_string(group_.Q / group_.gamma) + ")");
    outside_ = true;
  }
  s_ = group_.Q / (op_.degree() * p);
}

NormTerms norm_terms(const VariationalProblem& prob, const Field& u) {
  if (!(u.grid() == prob.grid())) throw DomainError("field grid does not match the problem grid");
  return evaluate(prob, u.values()).t;
}

double energy_L(const VariationalProblem& prob, const Field& u) { return energy_L(prob, norm_terms(prob, u)); }
double nehari_I(const VariationalProblem& prob, const Field& u) { return nehari_I(norm_terms(prob, u)); }

NehariProjection nehari_project(const VariationalProblem& prob, const Field& u) {
  const NormTerms t = norm_terms(prob, u);
  if (!(t.C > 0.0)) throw DomainError("nehari_project requires u != 0");
  const double mu = std::pow(t.sobolev_p() / t.C, 1.0 / (prob.q() - prob.p()));
  Field scaled = u.scaled(mu);
  const NormTerms ts = norm_terms(prob, scaled);
  return NehariProjection{mu, std::move(scaled), std::abs(nehari_I(ts)) / ts.C};
}

double weinstein_J(const VariationalProblem& prob, const NormTerms& t) {
  if (!(t.C > 0.0) || !(t.B > 0.0)) throw DomainError("weinstein_J requires u != 0");
  const double p = prob.p(), q = prob.q();
  return std::exp((q - q / p) * std::log(q) + ((q - p) / p) * std::log(t.A) + std::log(t.B) - std::log(t.C));
}
double weinstein_J(const VariationalProblem& prob, const Field& u) { return weinstein_J(prob, norm_terms(prob, u)); }

double euler_lagrange_residual(const VariationalProblem& prob, const Field& phi) {
  return el_residual(prob, evaluate(prob, phi.values()));
}

GroundStateResult analyze(const VariationalProblem& prob, const Field& phi) {
  const double p = prob.p(), q = prob.q();
  GroundStateResult r{phi};
  r.p = p;
  r.q = q;
  r.s = prob.s();
  r.Q = prob.Q();
  r.terms = norm_terms(prob, phi);
  const NormTerms& t = r.terms;
  r.d = energy_L(prob, t);
  r.mass = t.B;
  const double a_pred = (q - p) / p * t.B;
  const double c_pred = q / p * t.B;
  const double b_pred = p * p * r.d / (q - p);
  r.identity_residuals = {std::abs(t.A - a_pred) / a_pred, std::abs(t.C - c_pred) / c_pred,
                          std::abs(t.B - b_pred) / t.B};
  r.c_gn = 1.0 / weinstein_J(prob, t);
  const auto two = best_constant_two_route(p, q, r.mass, r.d);
  r.c_gn_from_mass = two.from_mass;
  r.c_gn_from_d = two.from_d;
  r.two_route_gap = two.relative_gap;
  r.j_route_gap = std::abs(r.c_gn - two.from_mass) / two.from_mass;
  r.c1_unpowered = std::pow(r.c_gn, 1.0 / q);
  r.residual = euler_lagrange_residual(prob, phi);
  r.boundary_ratio = boundary_ratio(phi);
  r.outside_hypotheses = prob.outside_hypotheses();
  return r;
}

GroundStateResult solve(const VariationalProblem& prob, const SolverConfig& config) {
  if (config.restart_widths.empty()) throw DomainError("solve needs at least one initial width");
  const bool fixed_point = config.method == SolverMethod::petviashvili ||
                           (config.method == SolverMethod::automatic && prob.p() == 2.0);
  if (fixed_point && prob.p() != 2.0) throw HypothesisError("spectral renormalization requires p = 2");
  const double tol = config.tol_pde > 0.0 ? config.tol_pde : (prob.p() == 2.0 ? 1e-8 : 1e-6);
  const double kappa = problem_nehari_floor(prob);
  const double base = decay_length(prob);

  const std::size_t n = config.restart_widths.size();
  std::vector<std::optional<GroundStateResult>> results(n);
  std::vector<std::exception_ptr> errors(n);
  parallel_for(n, config.workers, [&](std::size_t i) {
    try {
      const double width = base * config.restart_widths[i];
      Eigen::ArrayXd u0 = gaussian_guess(prob.grid(), width);
      RunOutcome run = fixed_point ? run_petviashvili(prob, std::move(u0), tol, config.max_iterations, kappa)
                                   : run_descent(prob, std::move(u0), Projection::nehari, 0.0, tol,
                                                 config.max_iterations, kappa);
      const Field raw(prob.grid(), std::move(run.u));
      GroundStateResult r = analyze(prob, nehari_project(prob, raw).scaled);
      r.iterations = run.iterations;
      r.converged = r.residual <= tol;
      r.method = fixed_point ? "petviashvili" : "descent";
      r.restart = static_cast<int>(i);
      r.width = width;
      r.nehari_floor = kappa;
      r.nehari_floor_margin = run.floor_margin;
      results[i] = std::move(r);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < n; ++i) {
    if (!results[i]) continue;
    if (config.require_convergence && !results[i]->converged) continue;
    if (!best || results[i]->d < results[*best]->d) best = i;
  }
  if (!best) {
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    double res = std::numeric_limits<double>::infinity();
    for (auto& r : results)
      if (r) res = std::min(res, r->residual);
    throw ConvergenceError("ground state did not converge: best residual " + std::to_string(res) + " > " +
                           std::to_string(tol));
  }
  return std::move(*results[*best]);
}

TRhoResult t_rho(const VariationalProblem& prob, double rho, const SolverConfig& config) {
  if (!(rho > 0.0)) throw DomainError("t_rho requires rho > 0");
  const double tol = config.tol_pde > 0.0 ? config.tol_pde : 1e-6;
  const double kappa = problem_nehari_floor(prob);
  const double width = decay_length(prob) * config.restart_widths.front();
  RunOutcome run = run_descent(prob, gaussian_guess(prob.grid(), width), Projection::q_sphere, rho, tol,
                               config.max_iterations, kappa);
  if (config.require_convergence && run.residual > tol)
    throw ConvergenceError("t_rho descent did not converge: residual " + std::to_string(run.residual));
  Field u(prob.grid(), std::move(run.u));
  const NormTerms t = norm_terms(prob, u);
  return TRhoResult{t.sobolev_p(), std::move(u), run.iterations};
}

std::string to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::automatic: return "automatic";
    case SolverMethod::petviashvili: return "petviashvili";
    case SolverMethod::descent: return "descent";
  }
  return "automatic";
}

}  // namespace gnsharp
