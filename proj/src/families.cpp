#include "gnsharp/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gnsharp/fourier.hpp"
#include "gnsharp/random.hpp"

namespace gnsharp {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::band_limited_noise: return "band_limited_noise";
    case FamilyKind::gaussians: return "gaussians";
    case FamilyKind::concentrating_bumps: return "concentrating_bumps";
    case FamilyKind::dilated_ground_states: return "dilated_ground_states";
    case FamilyKind::dyadic_bands: return "dyadic_bands";
  }
  return "gaussians";
}

FamilyKind family_kind_from_string(const std::string& name) {
  for (auto k : {FamilyKind::band_limited_noise, FamilyKind::gaussians, FamilyKind::concentrating_bumps,
                 FamilyKind::dilated_ground_states, FamilyKind::dyadic_bands})
    if (to_string(k) == name) return k;
  throw DomainError("unknown family kind '" + name + "'");
}

namespace {

double geometric(double from, double to, int index, int count) {
  if (count <= 1) return from;
  return from * std::pow(to / from, static_cast<double>(index) / (count - 1));
}

Field band_limited_noise(const TestFamily& fam, const PeriodicGrid& grid, int index) {
  Rng rng(mix_seed(fam.seed, index));
  const double cutoff = rng.log_uniform(fam.scale_min, fam.scale_max);
  const double sigma = grid.length() / 16.0 * rng.uniform(0.6, 1.0);
  Eigen::ArrayXd noise(grid.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = rng.normal();
  Eigen::ArrayXcd spec = forward_transform(grid, noise);
  const double w = 2.0 * std::numbers::pi / grid.length();
  const Eigen::ArrayXd k2 = squared_wavenumbers(grid) * (w * w);
  for (Eigen::Index i = 0; i < spec.size(); ++i)
    if (k2(i) > cutoff * cutoff) spec(i) = 0.0;
  Eigen::ArrayXd v = inverse_transform(grid, spec);
  // A wide Gaussian envelope keeps the field localized; its spectral tail is negligible.
  const Field env = sample(grid, [&](const Eigen::VectorXd& x) { return std::exp(-0.5 * x.squaredNorm() / (sigma * sigma)); });
  v *= env.values();
  const double m = v.abs().maxCoeff();
  if (m > 0.0) v /= m;
  return Field(grid, std::move(v));
}

Field gaussian(const TestFamily& fam, const PeriodicGrid& grid, int index) {
  Rng rng(mix_seed(fam.seed, index));
  const double width = rng.log_uniform(fam.scale_min, fam.scale_max);
  const double amp = rng.uniform(0.5, 2.0);
  Eigen::VectorXd center(grid.dim());
  for (int d = 0; d < grid.dim(); ++d) center(d) = rng.uniform(-0.5 * width, 0.5 * width);
  return sample(grid, [&](const Eigen::VectorXd& x) {
    return amp * std::exp(-0.5 * (x - center).squaredNorm() / (width * width));
  });
}

Field bump(const TestFamily& fam, const PeriodicGrid& grid, int index) {
  const double width = geometric(fam.scale_max, fam.scale_min, index, fam.count);
  const double e = fam.sharpness;
  return sample(grid, [&](const Eigen::VectorXd& x) { return std::exp(-std::pow(x.norm() / width, e)); });
}

Field dilated(const TestFamily& fam, const PeriodicGrid& grid, int index) {
  if (!fam.profile) throw DomainError("dilated_ground_states family needs a profile");
  if (!(fam.profile->grid() == grid)) throw DomainError("profile grid does not match the requested grid");
  Rng rng(mix_seed(fam.seed, index));
  const double factor = geometric(fam.scale_min, fam.scale_max, index, fam.count);
  const double amp = rng.uniform(0.5, 2.0);
  const Field g = factor == 1.0 ? *fam.profile : dilate_field(*fam.profile, factor);
  return g.scaled(amp);
}

Field dyadic(const TestFamily& fam, const PeriodicGrid& grid, int index) {
  if (grid.dim() != 1) throw DomainError("dyadic_bands family is one-dimensional");
  const long top = 1L << (index + 1);
  const long n = grid.points();
  if (top > n / 2) throw DomainError("dyadic_bands member exceeds the grid's Nyquist index");
  Eigen::ArrayXcd spec = Eigen::ArrayXcd::Zero(n);
  for (int block = 0; (1L << block) < top; ++block) {
    Rng rng(mix_seed(fam.seed, block));
    for (long m = 1L << block; m < (1L << (block + 1)); ++m) {
      const double c = rng.uniform(0.8, 1.2) / static_cast<double>(m);
      // Samples start at −L/2, so cos(2πmx/L) picks up (−1)^m.
      const double v = 0.5 * static_cast<double>(n) * c * (m % 2 ? -1.0 : 1.0);
      spec(m) = v;
      spec(n - m) = v;
    }
  }
  return Field(grid, inverse_transform(grid, spec));
}

}  // namespace

Field TestFamily::member(const PeriodicGrid& grid, int index) const {
  if (index < 0 || index >= count) throw DomainError("family index out of range");
  switch (kind) {
    case FamilyKind::band_limited_noise: return band_limited_noise(*this, grid, index);
    case FamilyKind::gaussians: return gaussian(*this, grid, index);
    case FamilyKind::concentrating_bumps: return bump(*this, grid, index);
    case FamilyKind::dilated_ground_states: return dilated(*this, grid, index);
    case FamilyKind::dyadic_bands: return dyadic(*this, grid, index);
  }
  throw DomainError("unknown family kind");
}

std::string TestFamily::describe() const {
  std::ostringstream os;
  os << to_string(kind) << " count=" << count << " seed=" << seed << " scale=[" << scale_min << ", " << scale_max
     << "]";
  if (kind == FamilyKind::concentrating_bumps) os << " sharpness=" << sharpness;
  return os.str();
}

}  // namespace gnsharp
