#include "gnsharp/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gnsharp {

using nlohmann::json;

namespace {

// JSON has no Inf/NaN; non-finite values are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

json to_json(const GroupDescriptor& g) {
  return {{"name", g.name()},   {"kind", to_string(g.kind)}, {"weights", g.weights},
          {"Q", g.Q},           {"gamma", g.gamma},          {"quasi_norm", to_string(g.quasi_norm)},
          {"koranyi_constant", g.koranyi_constant}};
}

GroupDescriptor group_from_json(const json& j) {
  GroupDescriptor g;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean")
    g.kind = GroupKind::euclidean;
  else if (kind == "heisenberg1")
    g.kind = GroupKind::heisenberg1;
  else if (kind == "graded")
    g.kind = GroupKind::graded;
  else
    throw InvalidDescriptorError("unknown group kind '" + kind + "'");
  g.weights = j.at("weights").get<std::vector<double>>();
  g.Q = j.at("Q").get<double>();
  g.gamma = j.at("gamma").get<double>();
  g.quasi_norm = quasi_norm_from_string(j.at("quasi_norm").get<std::string>());
  g.koranyi_constant = j.value("koranyi_constant", 16.0);
  g.validate();
  return g;
}

json to_json(const PeriodicGrid& grid) {
  return {{"n", grid.dim()}, {"L", grid.length()}, {"N", grid.points()}, {"h", grid.spacing()}};
}

json to_json(const HeisenbergGrid& grid) {
  return {{"half_widths", {grid.Lx, grid.Ly, grid.Lt}},
          {"points", {grid.Nx, grid.Ny, grid.Nt}},
          {"vector_fields", "X = dx - (y/2) dt, Y = dy + (x/2) dt"},
          {"measure", "dx dy dt"}};
}

json to_json(const ConstantsReport& r) {
  json env = {{"value", number(r.envelope.value)},
              {"argmax_q", r.envelope.argmax_q},
              {"argmax_index", r.envelope.argmax_index},
              {"endpoint_warning", r.envelope.endpoint_warning},
              {"q_min", r.envelope.q_grid.empty() ? 0.0 : r.envelope.q_grid.front()},
              {"q_max", r.envelope.q_grid.empty() ? 0.0 : r.envelope.q_grid.back()},
              {"points", r.envelope.q_grid.size()}};
  return {{"p", r.p},
          {"q", r.q},
          {"Q", r.Q},
          {"sphere_measure", r.sphere},
          {"quasi_norm", r.quasi_norm},
          {"lambda", r.lambda},
          {"M1", number(r.M1)},
          {"M2", number(r.M2)},
          {"theta", r.theta},
          {"marcinkiewicz_bound", number(r.marcinkiewicz_bound)},
          {"c1_envelope", env},
          {"c2_alpha_threshold", number(r.c2_alpha_threshold)},
          {"c2_sample_alpha", number(r.c2_sample_alpha)},
          {"c2_sample_value", number(r.c2_sample_value)},
          {"alpha_tilde", number(r.alpha_tilde)},
          {"nehari_floor", number(r.nehari_floor)}};
}

json to_json(const GroundStateResult& r) {
  return {{"params", {{"p", r.p}, {"q", r.q}, {"s", r.s}, {"Q", r.Q}}},
          {"grid", to_json(r.phi.grid())},
          {"terms", {{"A", r.terms.A}, {"B", r.terms.B}, {"C", r.terms.C}}},
          {"d", r.d},
          {"mass", r.mass},
          {"residuals", {r.identity_residuals[0], r.identity_residuals[1], r.identity_residuals[2]}},
          {"c_gn", r.c_gn},
          {"c_gn_from_mass", r.c_gn_from_mass},
          {"c_gn_from_d", r.c_gn_from_d},
          {"two_route_gap", r.two_route_gap},
          {"j_route_gap", r.j_route_gap},
          {"c1_unpowered", r.c1_unpowered},
          {"solver",
           {{"method", r.method},
            {"iterations", r.iterations},
            {"residual", r.residual},
            {"converged", r.converged},
            {"restart", r.restart},
            {"width", r.width}}},
          {"boundary_ratio", r.boundary_ratio},
          {"nehari_floor", number(r.nehari_floor)},
          {"nehari_floor_margin", number(r.nehari_floor_margin)},
          {"outside_hypotheses", r.outside_hypotheses}};
}

json to_json(const VerificationReport& r) {
  json params = json::object(), metrics = json::object(), series = json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
  for (const auto& [k, v] : r.series) series[k] = numbers(v);
  return {{"inequality", r.inequality}, {"family", r.family},       {"params", params},
          {"ratios", numbers(r.ratios)}, {"max", number(r.max_ratio)}, {"reference", number(r.reference)},
          {"tolerance", r.tolerance},    {"pass", r.pass},           {"metrics", metrics},
          {"series", series},            {"warnings", r.warnings}};
}

json to_json(const BWCalibration& c) {
  return {{"p", c.p},
          {"Q", c.Q},
          {"c1_empirical", c.c1_empirical},
          {"c4", c.c4},
          {"c4_theory", number(c.c4_theory)},
          {"omega_min", c.omega_min},
          {"family", c.family}};
}

BWCalibration bw_calibration_from_json(const json& j) {
  BWCalibration c;
  const json& body = j.contains("calibration") ? j.at("calibration") : j;
  c.p = body.at("p").get<double>();
  c.Q = body.at("Q").get<double>();
  c.c1_empirical = body.at("c1_empirical").get<double>();
  c.c4 = body.at("c4").get<double>();
  c.c4_theory = body.at("c4_theory").is_number() ? body.at("c4_theory").get<double>() : 0.0;
  c.omega_min = body.at("omega_min").get<double>();
  c.family = body.at("family").get<std::string>();
  return c;
}

json wrap_report(const std::string& kind, json payload) {
  json out = {{"schema_version", kSchemaVersion}, {"kind", kind}};
  for (auto& [k, v] : payload.items()) out[k] = std::move(v);
  return out;
}

void write_field(const std::filesystem::path& path, const Field& f) {
  static_assert(std::endian::native == std::endian::little, "field files are little-endian");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write(reinterpret_cast<const char*>(f.values().data()), f.size() * sizeof(double));
  json side = to_json(f.grid());
  side["schema_version"] = kSchemaVersion;
  side["dtype"] = "float64-le";
  write_text(path.string() + ".json", side.dump(2) + "\n");
}

Field read_field(const std::filesystem::path& path) {
  const json side = json::parse(read_text(path.string() + ".json"));
  if (side.at("schema_version").get<int>() != kSchemaVersion) throw std::runtime_error("unsupported field schema");
  const PeriodicGrid grid(side.at("n").get<int>(), side.at("L").get<double>(), side.at("N").get<int>());
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  Eigen::ArrayXd v(grid.size());
  is.read(reinterpret_cast<char*>(v.data()), v.size() * sizeof(double));
  if (is.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
    throw std::runtime_error("field file " + path.string() + " is truncated");
  return Field(grid, std::move(v));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string ratios_csv(const VerificationReport& r) {
  std::vector<std::pair<std::string, const std::vector<double>*>> cols;
  for (const auto& [k, v] : r.series)
    if (v.size() == r.ratios.size()) cols.emplace_back(k, &v);
  std::ostringstream os;
  os << "index,ratio";
  for (const auto& c : cols) os << ',' << c.first;
  os << '\n';
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    os << i << ',' << fmt(r.ratios[i]);
    for (const auto& c : cols) os << ',' << fmt((*c.second)[i]);
    os << '\n';
  }
  return os.str();
}

std::string constants_csv(const std::vector<ConstantsReport>& rows) {
  std::ostringstream os;
  os << "p,q,Q,lambda,M1,M2,theta,marcinkiewicz_bound,c1_envelope,c1_argmax_q,c2_alpha_threshold,alpha_tilde,"
        "nehari_floor\n";
  for (const auto& r : rows)
    os << fmt(r.p) << ',' << fmt(r.q) << ',' << fmt(r.Q) << ',' << fmt(r.lambda) << ',' << fmt(r.M1) << ','
       << fmt(r.M2) << ',' << fmt(r.theta) << ',' << fmt(r.marcinkiewicz_bound) << ',' << fmt(r.envelope.value) << ','
       << fmt(r.envelope.argmax_q) << ',' << fmt(r.c2_alpha_threshold) << ',' << fmt(r.alpha_tilde) << ','
       << fmt(r.nehari_floor) << '\n';
  return os.str();
}

}  // namespace gnsharp
