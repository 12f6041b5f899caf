#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gnsharp/errors.hpp"

namespace gnsharp {

enum class GroupKind { euclidean, heisenberg1, graded };
enum class QuasiNormKind { euclidean, anisotropic, koranyi };

std::string to_string(GroupKind kind);
std::string to_string(QuasiNormKind kind);
QuasiNormKind quasi_norm_from_string(const std::string& name);

/// Σ νᵢ; throws InvalidDescriptorError on an empty list or a non-positive weight.
double homogeneous_dimension(std::span<const double> weights);

/// Model homogeneous group: dilation weights, Q, gamma and the quasi-norm used
/// for balls and spheres. Immutable once built through one of the factories.
struct GroupDescriptor {
  GroupKind kind = GroupKind::euclidean;
  std::vector<double> weights;
  double Q = 0.0;
  double gamma = 1.0;
  QuasiNormKind quasi_norm = QuasiNormKind::euclidean;
  /// Coefficient c in ((x²+y²)² + c t²)^{1/4}; only read for the Korányi norm.
  double koranyi_constant = 16.0;

  static GroupDescriptor euclidean(int n);
  static GroupDescriptor heisenberg1(double koranyi_constant = 16.0);
  /// General weights with the anisotropic norm (Σ|xᵢ|^{2M/νᵢ})^{1/(2M)}, M = max weight.
  static GroupDescriptor graded(std::vector<double> weights);

  int dimension() const { return static_cast<int>(weights.size()); }
  /// "euclidean2", "heisenberg1", "graded".
  std::string name() const;

  /// Throws InvalidDescriptorError when the stored fields are inconsistent
  /// (Q != Σν, wrong gamma, Korányi norm on a non-Heisenberg group...).
  void validate() const;
};

/// Parses "euclidean<n>" or "heisenberg1".
GroupDescriptor group_from_name(const std::string& name);

Eigen::VectorXd dilate(const Eigen::VectorXd& x, double r, const GroupDescriptor& g);

/// Group law. Abelian addition except on H¹, where
/// (x,y,t)(x',y',t') = (x+x', y+y', t+t' + (xy' − yx')/2).
Eigen::VectorXd group_product(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              const GroupDescriptor& g);
inline Eigen::VectorXd group_inverse(const Eigen::VectorXd& x, const GroupDescriptor&) { return -x; }

template <typename Derived>
double quasi_norm(const Eigen::MatrixBase<Derived>& x, const GroupDescriptor& g) {
  switch (g.quasi_norm) {
    case QuasiNormKind::euclidean:
      return x.norm();
    case QuasiNormKind::koranyi: {
      const double r2 = x(0) * x(0) + x(1) * x(1);
      return std::pow(r2 * r2 + g.koranyi_constant * x(2) * x(2), 0.25);
    }
    case QuasiNormKind::anisotropic: {
      double m = 0.0;
      for (double w : g.weights) m = std::max(m, w);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        acc += std::pow(std::abs(x(i)), 2.0 * m / g.weights[i]);
      return std::pow(acc, 1.0 / (2.0 * m));
    }
  }
  return 0.0;
}

struct SphereMeasure {
  double value = 0.0;           ///< |℘| = Q · vol{|x| ≤ 1}
  double ball_volume = 0.0;
  double error_estimate = 0.0;  ///< |value(level) − value(level−1)|
  int level = 0;
  std::string quasi_norm;
};

/// |℘| by nested tanh-sinh quadrature over the unit quasi-ball, with the last
/// coordinate's section length taken in closed form. `level` halves the
/// quadrature step each increment; the result at level−1 gives the error
/// estimate. Throws AccuracyError when the estimate exceeds `tolerance`·value.
SphereMeasure sphere_measure(const GroupDescriptor& g, int level = 7, double tolerance = 1e-9);

/// Half-length of the section {s : |(prefix, s, 0, …, 0)| ≤ 1} along coordinate
/// prefix.size(). Every supported quasi-norm is even and nondecreasing in each
/// |xᵢ|, so the section is a symmetric interval.
double ball_section_half_width(std::span<const double> prefix, const GroupDescriptor& g);

}  // namespace gnsharp
