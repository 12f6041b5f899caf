#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "gnsharp/discretization.hpp"

namespace gnsharp {

enum class FamilyKind { band_limited_noise, gaussians, concentrating_bumps, dilated_ground_states, dyadic_bands };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// Deterministic function family. Members are generated on demand from
/// (seed, index), so large families never sit in memory at once.
///
/// scale_min/scale_max mean, per kind:
///   band_limited_noise     physical wavenumber cutoff |k| (log-uniform per member)
///   gaussians              width (log-uniform)
///   concentrating_bumps    width, geometric from scale_max down to scale_min
///   dilated_ground_states  dilation factor, geometric
///   dyadic_bands           unused; member j holds modes 1 ≤ m < 2^{j+1} (1-D only)
struct TestFamily {
  FamilyKind kind = FamilyKind::gaussians;
  std::uint64_t seed = 0;
  int count = 0;
  double scale_min = 1.0;
  double scale_max = 1.0;
  /// Exponent e of the bump profile exp(−(|x|/w)^e); larger is sharper.
  double sharpness = 4.0;
  /// Profile for dilated_ground_states.
  std::shared_ptr<const Field> profile;

  Field member(const PeriodicGrid& grid, int index) const;
  std::string describe() const;
};

}  // namespace gnsharp
