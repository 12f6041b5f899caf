#include "gnsharp/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include "gnsharp/constants.hpp"
#include "gnsharp/families.hpp"
#include "gnsharp/ground_state.hpp"
#include "gnsharp/heisenberg.hpp"
#include "gnsharp/io.hpp"
#include "gnsharp/parallel.hpp"
#include "gnsharp/verifier.hpp"

namespace gnsharp {

using nlohmann::json;

void validate_hypotheses(const std::string& command, const RunConfig& cfg) {
  const GroupDescriptor g = group_from_name(cfg.group);
  if (!(cfg.p > 1.0)) throw HypothesisError("requires p > 1 (p = " + std::to_string(cfg.p) + ")");
  if (command == "constants" || command == "ground-state" || command == "report") {
    if (!(cfg.q > cfg.p)) throw HypothesisError("requires q > p (p = " + std::to_string(cfg.p) +
                                                ", q = " + std::to_string(cfg.q) + ")");
  }
  if (command == "ground-state" && !cfg.allow_outside_hypotheses && cfg.p > g.Q / g.gamma)
    throw HypothesisError("requires p <= Q/gamma (p = " + std::to_string(cfg.p) + ", Q/gamma = " +
                          std::to_string(g.Q / g.gamma) + "); pass --allow-outside-hypotheses to run anyway");
  if (command == "bgw" && !(cfg.a > g.Q / cfg.q))
    throw HypothesisError("requires a > Q/q (a = " + std::to_string(cfg.a) + ", Q/q = " + std::to_string(g.Q / cfg.q) +
                          ")");
  if (cfg.N < 4) throw HypothesisError("requires N >= 4");
  if (!(cfg.L > 0.0)) throw HypothesisError("requires L > 0");
}

namespace {

struct FamilyOptions {
  std::string kind;
  int count = 0;
  double scale_min = 1.0, scale_max = 1.0, sharpness = 4.0;

  TestFamily make(std::uint64_t seed) const {
    TestFamily f;
    f.kind = family_kind_from_string(kind);
    f.seed = seed;
    f.count = count;
    f.scale_min = scale_min;
    f.scale_max = scale_max;
    f.sharpness = sharpness;
    return f;
  }
};

struct Leaf {
  RunConfig cfg;
  FamilyOptions family;
  // Subcommand-specific knobs.
  double alpha = 0.0, c1 = 0.0, c4 = 0.0, tol = 0.0, split_cutoff = 0.0, q_max = 1e4, Lt = 3.3;
  int pairs = 200, radii = 25, steps = 40;
  std::string method = "automatic", field_out, calibration, write_calibration, p_list, q_list;
  bool bisect = false;
};

void add_common(CLI::App* app, Leaf& leaf, bool grid) {
  app->add_option("--group", leaf.cfg.group, "euclidean<n> or heisenberg1")->capture_default_str();
  app->add_option("--p", leaf.cfg.p, "Lebesgue exponent p > 1")->capture_default_str();
  app->add_option("--seed", leaf.cfg.seed, "single seed for all randomness")->capture_default_str();
  app->add_option("--workers", leaf.cfg.workers, "worker threads (default from GNSHARP_WORKERS)");
  app->add_option("--out", leaf.cfg.out, "JSON report path (stdout if omitted)");
  app->add_option("--csv", leaf.cfg.csv, "CSV table path");
  if (grid) {
    app->add_option("--N", leaf.cfg.N, "points per axis")->capture_default_str();
    app->add_option("--L", leaf.cfg.L, "box length")->capture_default_str();
  }
}

void add_family(CLI::App* app, Leaf& leaf) {
  app->add_option("--family", leaf.family.kind, "band_limited_noise | gaussians | concentrating_bumps | dyadic_bands")
      ->capture_default_str();
  app->add_option("--count", leaf.family.count, "family size")->capture_default_str();
  app->add_option("--scale-min", leaf.family.scale_min, "smallest family scale")->capture_default_str();
  app->add_option("--scale-max", leaf.family.scale_max, "largest family scale")->capture_default_str();
  app->add_option("--sharpness", leaf.family.sharpness, "bump exponent")->capture_default_str();
}

InequalitySetting make_setting(const RunConfig& cfg) {
  const GroupDescriptor g = group_from_name(cfg.group);
  if (g.kind != GroupKind::euclidean) throw HypothesisError("this check runs on euclidean<n> groups");
  return InequalitySetting(SpectralOperator(PeriodicGrid(g.dimension(), cfg.L, cfg.N)), g, cfg.p);
}

double default_c1(const InequalitySetting& set) {
  return c1_envelope(set.p, set.Q(), sphere_measure(set.group).value).value;
}

void emit(const RunConfig& cfg, const json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.out.empty())
    out << text;
  else
    write_text(cfg.out, text);
}

json report_json(const std::string& kind, const RunConfig& cfg, const VerificationReport& rep) {
  json j = wrap_report(kind, to_json(rep));
  j["group"] = cfg.group;
  j["seed"] = cfg.seed;
  return j;
}

int finish_verification(const std::string& kind, const Leaf& leaf, const VerificationReport& rep, std::ostream& out) {
  emit(leaf.cfg, report_json(kind, leaf.cfg, rep), out);
  if (!leaf.cfg.csv.empty()) write_text(leaf.cfg.csv, ratios_csv(rep));
  return rep.pass ? kExitPass : kExitFail;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) v.push_back(std::stod(item));
  if (v.empty()) throw DomainError("empty value list '" + s + "'");
  return v;
}

int cmd_constants(const Leaf& leaf, std::ostream& out) {
  validate_hypotheses("constants", leaf.cfg);
  const GroupDescriptor g = group_from_name(leaf.cfg.group);
  const auto sm = sphere_measure(g);
  const ConstantsReport r = constants_report(leaf.cfg.p, leaf.cfg.q, g.Q, sm.value, to_string(g.quasi_norm));
  json j = wrap_report("constants", to_json(r));
  j["group"] = to_json(g);
  emit(leaf.cfg, j, out);
  if (!leaf.cfg.csv.empty()) {
    std::ostringstream os;
    os << "q,bound_over_q_power\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.envelope.q_grid.size(); ++i)
      os << r.envelope.q_grid[i] << ',' << r.envelope.normalized[i] << '\n';
    write_text(leaf.cfg.csv, os.str());
  }
  return kExitPass;
}

int cmd_report(const Leaf& leaf, std::ostream& out) {
  const GroupDescriptor g = group_from_name(leaf.cfg.group);
  const double sphere = sphere_measure(g).value;
  std::vector<ConstantsReport> rows;
  json arr = json::array();
  for (double p : parse_list(leaf.p_list))
    for (double q : parse_list(leaf.q_list)) {
      RunConfig c = leaf.cfg;
      c.p = p;
      c.q = q;
      validate_hypotheses("report", c);
      rows.push_back(constants_report(p, q, g.Q, sphere, to_string(g.quasi_norm)));
      arr.push_back(to_json(rows.back()));
    }
  json j = wrap_report("constants_table", {{"group", to_json(g)}, {"rows", arr}});
  emit(leaf.cfg, j, out);
  if (!leaf.cfg.csv.empty()) write_text(leaf.cfg.csv, constants_csv(rows));
  return kExitPass;
}

int cmd_ground_state(const Leaf& leaf, std::ostream& out) {
  validate_hypotheses("ground-state", leaf.cfg);
  const GroupDescriptor g = group_from_name(leaf.cfg.group);
  if (g.kind != GroupKind::euclidean)
    throw HypothesisError("ground states are solved on euclidean<n> groups only");
  const VariationalProblem prob(SpectralOperator(PeriodicGrid(g.dimension(), leaf.cfg.L, leaf.cfg.N)), g,
                                leaf.cfg.p, leaf.cfg.q,
                                leaf.cfg.allow_outside_hypotheses ? HypothesisPolicy::relaxed
                                                                  : HypothesisPolicy::enforce);
  SolverConfig sc;
  sc.workers = leaf.cfg.workers;
  sc.tol_pde = leaf.tol;
  if (leaf.method == "petviashvili")
    sc.method = SolverMethod::petviashvili;
  else if (leaf.method == "descent")
    sc.method = SolverMethod::descent;
  else if (leaf.method != "automatic")
    throw DomainError("unknown method '" + leaf.method + "'");
  const GroundStateResult r = solve(prob, sc);
  json j = wrap_report("ground_state", to_json(r));
  j["group"] = to_json(g);
  emit(leaf.cfg, j, out);
  if (!leaf.field_out.empty()) write_field(leaf.field_out, r.phi);
  return r.converged ? kExitPass : kExitFail;
}

int cmd_verify_gn(const Leaf& leaf, std::ostream& out) {
  validate_hypotheses("gn", leaf.cfg);
  const GroupDescriptor g = group_from_name(leaf.cfg.group);
  if (g.kind == GroupKind::heisenberg1) {
    if (leaf.cfg.p != 2.0) throw HypothesisError("heisenberg1 checks use p = 2");
    const HeisenbergGrid grid(leaf.cfg.L, leaf.cfg.L, leaf.Lt, leaf.cfg.N, leaf.cfg.N, leaf.cfg.N);
    HeisenbergFamily fam;
    fam.count = leaf.family.count;
    fam.w_min = leaf.family.scale_min;
    fam.w_max = leaf.family.scale_max;
    VerificationReport rep = empirical_gn_ratio_h1(grid, fam, leaf.cfg.q, leaf.cfg.workers);
    json j = report_json("verification", leaf.cfg, rep);
    j["grid"] = to_json(grid);
    emit(leaf.cfg, j, out);
    if (!leaf.cfg.csv.empty()) write_text(leaf.cfg.csv, ratios_csv(rep));
    return rep.pass ? kExitPass : kExitFail;
  }
  const InequalitySetting set = make_setting(leaf.cfg);
  const double c1 = leaf.c1 > 0.0 ? leaf.c1 : default_c1(set);
  const auto rep = verify_gn(set, leaf.family.make(leaf.cfg.seed), c1, default_verify_q_grid(set.p, 32, leaf.q_max),
                             leaf.cfg.workers);
  return finish_verification("verification", leaf, rep, out);
}

int cmd_verify_trudinger(const Leaf& leaf, std::ostream& out) {
  validate_hypotheses("trudinger", leaf.cfg);
  const InequalitySetting set = make_setting(leaf.cfg);
  const double c1 = leaf.c1 > 0.0 ? leaf.c1 : default_c1(set);
  const double alpha = leaf.alpha > 0.0 ? leaf.alpha : 0.5 * trudinger_alpha_threshold(c1, set.p);
  const TestFamily fam = leaf.family.make(leaf.cfg.seed);
  VerificationReport rep = verify_trudinger(set, fam, alpha, c1, leaf.cfg.workers);
  if (leaf.bisect) {
    const auto b = max_passing_alpha(set, fam, c1, leaf.steps, leaf.cfg.workers);
    rep.metrics["alpha_max"] = b.alpha_max;
    rep.metrics["alpha_ceiling"] = b.alpha_ceiling;
    rep.metrics["ceiling_passes"] = b.ceiling_passes ? 1.0 : 0.0;
  }
  return finish_verification("verification", leaf, rep, out);
}

int cmd_verify_bgw(const Leaf& leaf, std::ostream& out) {
  validate_hypotheses("bgw", leaf.cfg);
  const InequalitySetting set = make_setting(leaf.cfg);
  BGWOptions opts;
  opts.a = leaf.cfg.a;
  opts.q = leaf.cfg.q;
  opts.split_cutoff = leaf.split_cutoff;
  return finish_verification("verification", leaf, verify_bgw(set, leaf.family.make(leaf.cfg.seed), opts,
                                                               leaf.cfg.workers),
                             out);
}

int cmd_verify_bw(const Leaf& leaf, std::ostream& out) {
  validate_hypotheses("bw", leaf.cfg);
  const InequalitySetting set = make_setting(leaf.cfg);
  const TestFamily fam = leaf.family.make(leaf.cfg.seed);
  const double omega_min = 1e-6, omega_max = 10.0;
  double c4 = leaf.c4;
  std::string c4_source = "flag";
  if (!(c4 > 0.0)) {
    if (!leaf.calibration.empty()) {
      c4 = bw_calibration_from_json(json::parse(read_text(leaf.calibration))).c4;
      c4_source = leaf.calibration;
    } else {
      const BWCalibration cal = calibrate_bw(set, fam, default_c1(set), omega_min, leaf.cfg.workers);
      c4 = cal.c4;
      c4_source = "calibrated on the verified family";
      if (!leaf.write_calibration.empty()) {
        json j = wrap_report("bw_calibration", {{"calibration", to_json(cal)}});
        j["group"] = leaf.cfg.group;
        j["grid"] = to_json(set.grid());
        j["seed"] = leaf.cfg.seed;
        write_text(leaf.write_calibration, j.dump(2) + "\n");
      }
    }
  }
  const double sphere = sphere_measure(set.group).value;
  const auto radii = radii_for_measures(set.group, sphere, omega_min, omega_max, leaf.radii);
  VerificationReport all;
  all.inequality = "bw";
  all.family = fam.describe();
  all.reference = c4;
  std::vector<double> member;
  for (int i = 0; i < fam.count; ++i) {
    const auto rep = verify_bw_set(set, fam.member(set.grid(), i), radii, c4);
    all.params = rep.params;
    all.ratios.insert(all.ratios.end(), rep.ratios.begin(), rep.ratios.end());
    member.insert(member.end(), rep.ratios.size(), double(i));
    for (const auto& [k, v] : rep.series) {
      auto& dst = all.series[k];
      dst.insert(dst.end(), v.begin(), v.end());
    }
    all.warnings.insert(all.warnings.end(), rep.warnings.begin(), rep.warnings.end());
  }
  all.params.erase("sobolev_norm");
  all.series["member"] = member;
  all.finalize();
  all.warnings.push_back("C4 source: " + c4_source);
  return finish_verification("verification", leaf, all, out);
}

int cmd_verify_holder(const Leaf& leaf, std::ostream& out) {
  validate_hypotheses("holder", leaf.cfg);
  const InequalitySetting set = make_setting(leaf.cfg);
  const auto rep = verify_holder_lemma(set, leaf.family.make(leaf.cfg.seed), leaf.alpha, leaf.pairs, leaf.cfg.seed,
                                       leaf.cfg.workers);
  return finish_verification("verification", leaf, rep, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gnsharp: critical Sobolev-scale constants, ground states and inequality checks"};
  app.require_subcommand(1);
  const int workers = default_worker_count();

  Leaf constants, report, ground, gn, trud, bgw, bw, holder;
  for (Leaf* l : {&constants, &report, &ground, &gn, &trud, &bgw, &bw, &holder}) l->cfg.workers = workers;

  auto* c_constants = app.add_subcommand("constants", "closed-form constants for one (p, q)");
  add_common(c_constants, constants, false);
  c_constants->add_option("--q", constants.cfg.q, "Lebesgue exponent q > p")->capture_default_str();

  auto* c_report = app.add_subcommand("report", "constants table over a (p, q) grid");
  add_common(c_report, report, false);
  report.p_list = "1.5,2,3";
  report.q_list = "4,8,16,64";
  c_report->add_option("--p-list", report.p_list, "comma-separated p values")->capture_default_str();
  c_report->add_option("--q-list", report.q_list, "comma-separated q values")->capture_default_str();

  auto* c_ground = app.add_subcommand("ground-state", "least-energy solution and sharp GN constant");
  ground.cfg.N = 256;
  ground.cfg.L = 30.0;
  add_common(c_ground, ground, true);
  c_ground->add_option("--q", ground.cfg.q, "nonlinearity exponent q > p")->capture_default_str();
  c_ground->add_option("--method", ground.method, "automatic | petviashvili | descent")->capture_default_str();
  c_ground->add_option("--tol", ground.tol, "residual tolerance (0 = automatic)")->capture_default_str();
  c_ground->add_option("--field", ground.field_out, "write phi as a binary field");
  c_ground->add_flag("--allow-outside-hypotheses", ground.cfg.allow_outside_hypotheses,
                     "solve even when p > Q/gamma");

  auto* c_verify = app.add_subcommand("verify", "empirical inequality checks");
  c_verify->require_subcommand(1);

  auto* v_gn = c_verify->add_subcommand("gn", "critical Gagliardo-Nirenberg ratios");
  gn.family = {"band_limited_noise", 200, 1.0, 8.0, 4.0};
  gn.cfg.N = 128;
  gn.cfg.L = 20.0;
  add_common(v_gn, gn, true);
  add_family(v_gn, gn);
  v_gn->add_option("--c1", gn.c1, "reference constant (default: c1_envelope)");
  v_gn->add_option("--q-max", gn.q_max, "largest q on the ratio grid")->capture_default_str();
  v_gn->add_option("--q", gn.cfg.q, "q for heisenberg1")->capture_default_str();
  v_gn->add_option("--Lt", gn.Lt, "t half-width for heisenberg1")->capture_default_str();
  v_gn->callback([&] {
    if (gn.cfg.group == "heisenberg1") {
      // Box half-widths and widths suited to the Korányi-Gaussian family.
      if (v_gn->count("--N") == 0) gn.cfg.N = 64;
      if (v_gn->count("--L") == 0) gn.cfg.L = 3.8;
      if (v_gn->count("--family") == 0) gn.family.kind = "gaussians";
      if (v_gn->count("--count") == 0) gn.family.count = 20;
      if (v_gn->count("--scale-min") == 0) gn.family.scale_min = 1.0;
      if (v_gn->count("--scale-max") == 0) gn.family.scale_max = 1.6;
    }
  });

  auto* v_trud = c_verify->add_subcommand("trudinger", "exponential integrability");
  trud.family = {"gaussians", 100, 0.5, 3.0, 4.0};
  trud.cfg.N = 128;
  trud.cfg.L = 20.0;
  add_common(v_trud, trud, true);
  add_family(v_trud, trud);
  v_trud->add_option("--alpha", trud.alpha, "default: half the series threshold");
  v_trud->add_option("--c1", trud.c1, "C1 (default: c1_envelope)");
  v_trud->add_flag("--bisect", trud.bisect, "also bisect for the largest passing alpha");
  v_trud->add_option("--steps", trud.steps, "bisection steps")->capture_default_str();

  auto* v_bgw = c_verify->add_subcommand("bgw", "logarithmic L-infinity bound");
  bgw.family = {"dyadic_bands", 20, 1.0, 1.0, 4.0};
  bgw.cfg.group = "euclidean1";
  bgw.cfg.N = 1 << 21;
  bgw.cfg.L = 0.4;
  bgw.cfg.a = 1.45;
  bgw.cfg.q = 2.0;
  add_common(v_bgw, bgw, true);
  add_family(v_bgw, bgw);
  v_bgw->add_option("--a", bgw.cfg.a, "smoothness of the higher-order norm")->capture_default_str();
  v_bgw->add_option("--q", bgw.cfg.q, "exponent of the higher-order norm")->capture_default_str();
  v_bgw->add_option("--split-cutoff", bgw.split_cutoff, "symbol cutoff for the low/high split")
      ->capture_default_str();

  auto* v_bw = c_verify->add_subcommand("bw", "set estimate over balls");
  bw.family = {"gaussians", 10, 0.3, 1.3, 4.0};
  bw.cfg.N = 128;
  bw.cfg.L = 20.0;
  add_common(v_bw, bw, true);
  add_family(v_bw, bw);
  v_bw->add_option("--c4", bw.c4, "constant (default: calibration file, else calibrate)");
  v_bw->add_option("--calibration", bw.calibration, "calibration JSON");
  v_bw->add_option("--write-calibration", bw.write_calibration, "write the calibration used to this path");
  v_bw->add_option("--radii", bw.radii, "number of radii")->capture_default_str();

  auto* v_holder = c_verify->add_subcommand("holder", "Hoelder seminorm of Riesz potentials");
  holder.family = {"band_limited_noise", 50, 1.0, 8.0, 4.0};
  holder.cfg.N = 128;
  holder.cfg.L = 20.0;
  holder.alpha = 0.5;
  add_common(v_holder, holder, true);
  add_family(v_holder, holder);
  v_holder->add_option("--alpha", holder.alpha, "Hoelder exponent in (0, 1)")->capture_default_str();
  v_holder->add_option("--pairs", holder.pairs, "displacement samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (c_constants->parsed()) return cmd_constants(constants, out);
    if (c_report->parsed()) return cmd_report(report, out);
    if (c_ground->parsed()) return cmd_ground_state(ground, out);
    if (v_gn->parsed()) return cmd_verify_gn(gn, out);
    if (v_trud->parsed()) return cmd_verify_trudinger(trud, out);
    if (v_bgw->parsed()) return cmd_verify_bgw(bgw, out);
    if (v_bw->parsed()) return cmd_verify_bw(bw, out);
    if (v_holder->parsed()) return cmd_verify_holder(holder, out);
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << "error: no command\n";
  return kExitError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("gnsharp");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace gnsharp
