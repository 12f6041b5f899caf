#include "gnsharp/group_model.hpp"

#include <algorithm>
#include <numeric>

#include "gnsharp/quadrature.hpp"

namespace gnsharp {

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::euclidean: return "euclidean";
    case GroupKind::heisenberg1: return "heisenberg1";
    case GroupKind::graded: return "graded";
  }
  return "unknown";
}

std::string to_string(QuasiNormKind kind) {
  switch (kind) {
    case QuasiNormKind::euclidean: return "euclidean";
    case QuasiNormKind::anisotropic: return "anisotropic";
    case QuasiNormKind::koranyi: return "koranyi";
  }
  return "unknown";
}

QuasiNormKind quasi_norm_from_string(const std::string& name) {
  if (name == "euclidean") return QuasiNormKind::euclidean;
  if (name == "anisotropic") return QuasiNormKind::anisotropic;
  if (name == "koranyi") return QuasiNormKind::koranyi;
  throw InvalidDescriptorError("unknown quasi-norm '" + name + "'");
}

double homogeneous_dimension(std::span<const double> weights) {
  if (weights.empty()) throw InvalidDescriptorError("dilation weights must be non-empty");
  for (double w : weights)
    if (!(w > 0.0)) throw InvalidDescriptorError("dilation weights must be strictly positive");
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

GroupDescriptor GroupDescriptor::euclidean(int n) {
  if (n < 1) throw InvalidDescriptorError("euclidean dimension must be >= 1");
  GroupDescriptor g;
  g.kind = GroupKind::euclidean;
  g.weights.assign(n, 1.0);
  g.Q = homogeneous_dimension(g.weights);
  g.gamma = 1.0;
  g.quasi_norm = QuasiNormKind::euclidean;
  return g;
}

GroupDescriptor GroupDescriptor::heisenberg1(double koranyi_constant) {
  if (!(koranyi_constant > 0.0)) throw InvalidDescriptorError("Korányi constant must be positive");
  GroupDescriptor g;
  g.kind = GroupKind::heisenberg1;
  g.weights = {1.0, 1.0, 2.0};
  g.Q = homogeneous_dimension(g.weights);
  g.gamma = 1.0;
  g.quasi_norm = QuasiNormKind::koranyi;
  g.koranyi_constant = koranyi_constant;
  return g;
}

GroupDescriptor GroupDescriptor::graded(std::vector<double> weights) {
  GroupDescriptor g;
  g.kind = GroupKind::graded;
  g.Q = homogeneous_dimension(weights);
  std::sort(weights.begin(), weights.end());
  g.weights = std::move(weights);
  const bool all_one = std::all_of(g.weights.begin(), g.weights.end(), [](double w) { return w == 1.0; });
  g.gamma = all_one ? 1.0 : g.weights.back();
  g.quasi_norm = all_one ? QuasiNormKind::euclidean : QuasiNormKind::anisotropic;
  return g;
}

std::string GroupDescriptor::name() const {
  if (kind == GroupKind::euclidean) return "euclidean" + std::to_string(dimension());
  return to_string(kind);
}

void GroupDescriptor::validate() const {
  const double sum = homogeneous_dimension(weights);
  if (std::abs(sum - Q) > 1e-15 * std::max(1.0, sum))
    throw InvalidDescriptorError("Q must equal the sum of the dilation weights");
  if (!std::is_sorted(weights.begin(), weights.end()))
    throw InvalidDescriptorError("dilation weights must be nondecreasing");
  const bool all_one = std::all_of(weights.begin(), weights.end(), [](double w) { return w == 1.0; });
  const bool stratified = kind == GroupKind::heisenberg1 || all_one;
  const double expected_gamma = stratified ? 1.0 : weights.back();
  if (gamma != expected_gamma) throw InvalidDescriptorError("gamma inconsistent with the dilation weights");
  if (kind == GroupKind::heisenberg1) {
    if (weights != std::vector<double>{1.0, 1.0, 2.0})
      throw InvalidDescriptorError("heisenberg1 requires weights (1, 1, 2)");
    if (quasi_norm != QuasiNormKind::koranyi) throw InvalidDescriptorError("heisenberg1 uses the Korányi norm");
    if (!(koranyi_constant > 0.0)) throw InvalidDescriptorError("Korányi constant must be positive");
  } else if (quasi_norm == QuasiNormKind::koranyi) {
    throw InvalidDescriptorError("the Korányi norm is only defined on heisenberg1");
  }
  if (kind == GroupKind::euclidean && !all_one) throw InvalidDescriptorError("euclidean groups have unit weights");
}

GroupDescriptor group_from_name(const std::string& name) {
  if (name == "heisenberg1") return GroupDescriptor::heisenberg1();
  const std::string prefix = "euclidean";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size()) {
    const std::string digits = name.substr(prefix.size());
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return GroupDescriptor::euclidean(std::stoi(digits));
  }
  throw InvalidDescriptorError("unknown group '" + name + "' (expected euclidean<n> or heisenberg1)");
}

Eigen::VectorXd dilate(const Eigen::VectorXd& x, double r, const GroupDescriptor& g) {
  if (!(r > 0.0)) throw DomainError("dilation factor must be positive");
  if (x.size() != g.dimension()) throw DomainError("point dimension does not match the group");
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = std::pow(r, g.weights[i]) * x(i);
  return out;
}

Eigen::VectorXd group_product(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const GroupDescriptor& g) {
  Eigen::VectorXd out = a + b;
  if (g.kind == GroupKind::heisenberg1) out(2) += 0.5 * (a(0) * b(1) - a(1) * b(0));
  return out;
}

double ball_section_half_width(std::span<const double> prefix, const GroupDescriptor& g) {
  const std::size_t i = prefix.size();
  switch (g.quasi_norm) {
    case QuasiNormKind::euclidean: {
      double acc = 0.0;
      for (double v : prefix) acc += v * v;
      return acc >= 1.0 ? 0.0 : std::sqrt(1.0 - acc);
    }
    case QuasiNormKind::anisotropic: {
      const double m = *std::max_element(g.weights.begin(), g.weights.end());
      double acc = 0.0;
      for (std::size_t j = 0; j < i; ++j) acc += std::pow(std::abs(prefix[j]), 2.0 * m / g.weights[j]);
      return acc >= 1.0 ? 0.0 : std::pow(1.0 - acc, g.weights[i] / (2.0 * m));
    }
    case QuasiNormKind::koranyi: {
      if (i == 0) return 1.0;
      if (i == 1) return prefix[0] * prefix[0] >= 1.0 ? 0.0 : std::sqrt(1.0 - prefix[0] * prefix[0]);
      const double r2 = prefix[0] * prefix[0] + prefix[1] * prefix[1];
      const double rest = 1.0 - r2 * r2;
      return rest <= 0.0 ? 0.0 : std::sqrt(rest / g.koranyi_constant);
    }
  }
  return 0.0;
}

namespace {

// Volume of the unit quasi-ball: integrate coordinates 0..n-2 over their
// sections, the last coordinate contributes its section length 2·b.
double nested_ball_volume(const GroupDescriptor& g, const TanhSinhRule& rule, std::vector<double>& prefix) {
  const std::size_t n = g.weights.size();
  const double b = ball_section_half_width(prefix, g);
  if (prefix.size() + 1 == n) return 2.0 * b;
  if (b <= 0.0) return 0.0;
  return rule.integrate(
      [&](double s) {
        prefix.push_back(s);
        const double v = nested_ball_volume(g, rule, prefix);
        prefix.pop_back();
        return v;
      },
      -b, b);
}

}  // namespace

SphereMeasure sphere_measure(const GroupDescriptor& g, int level, double tolerance) {
  g.validate();
  if (level < 2) throw AccuracyError("sphere_measure: level must be at least 2");
  auto volume_at = [&](int lv) {
    TanhSinhRule rule(lv);
    std::vector<double> prefix;
    return nested_ball_volume(g, rule, prefix);
  };
  const double fine = volume_at(level);
  const double coarse = volume_at(level - 1);
  SphereMeasure out;
  out.ball_volume = fine;
  out.value = g.Q * fine;
  out.error_estimate = g.Q * std::abs(fine - coarse);
  out.level = level;
  out.quasi_norm = to_string(g.quasi_norm);
  if (out.error_estimate > tolerance * out.value)
    throw AccuracyError("sphere_measure: quadrature level " + std::to_string(level) +
                        " does not meet the convergence check");
  return out;
}

}  // namespace gnsharp
