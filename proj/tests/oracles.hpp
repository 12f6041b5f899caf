#pragma once

// Reference computations that share no code with the library.

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace oracle {

struct TownesProfile {
  double u0 = 0.0;    ///< central amplitude
  double mass = 0.0;  ///< 2π ∫ u² r dr
};

// Radial shooting for u″ + u′/r − u + u³ = 0, u′(0) = 0, u → 0.
// Overshoot (u crosses zero) means u(0) is too large; undershoot (u turns
// back up while positive) means it is too small.
inline TownesProfile townes_shooting(int bisections = 60, double step = 1e-3, double r_max = 30.0) {
  using State = std::array<double, 3>;  // u, u′, accumulated mass
  const auto rhs = [](const State& s, State& d, double r) {
    d[0] = s[1];
    d[1] = -s[1] / r + s[0] - s[0] * s[0] * s[0];
    d[2] = 2.0 * std::numbers::pi * s[0] * s[0] * r;
  };
  boost::numeric::odeint::runge_kutta4<State> stepper;
  // Returns +1 on overshoot, −1 on undershoot, along with the mass up to the
  // point where the trajectory left the separatrix.
  const auto shoot = [&](double u0, double* mass) {
    double r = 1e-6;
    State s{u0 + 0.25 * r * r * (u0 - u0 * u0 * u0), 0.5 * r * (u0 - u0 * u0 * u0), 0.0};
    while (r < r_max) {
      stepper.do_step(rhs, s, r, step);
      r += step;
      if (s[0] < 0.0) {
        *mass = s[2];
        return 1;
      }
      if (s[1] > 0.0) {
        *mass = s[2];
        return -1;
      }
    }
    *mass = s[2];
    return 0;
  };
  double lo = 1.5, hi = 3.0, mass = 0.0;
  for (int i = 0; i < bisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    const int side = shoot(mid, &mass);
    if (side > 0)
      hi = mid;
    else if (side < 0)
      lo = mid;
    else
      break;
  }
  TownesProfile out;
  out.u0 = 0.5 * (lo + hi);
  shoot(out.u0, &out.mass);
  return out;
}

}  // namespace oracle
