#include <doctest.h>

#include <complex>
#include <numbers>

#include "gnsharp/discretization.hpp"
#include "gnsharp/fourier.hpp"
#include "gnsharp/random.hpp"
#include "gnsharp/spectral_operator.hpp"

using namespace gnsharp;
using std::numbers::pi;

namespace {

Field random_field(const PeriodicGrid& grid, std::uint64_t seed, bool mean_zero = false) {
  Rng rng(seed);
  Eigen::ArrayXd v(grid.size());
  for (auto& x : v) x = rng.normal();
  if (mean_zero) v -= v.mean();
  return Field(grid, v);
}

Field plane_wave(const PeriodicGrid& grid, const std::vector<int>& k) {
  return sample(grid, [&](const Eigen::VectorXd& x) {
    double phase = 0.0;
    for (int d = 0; d < grid.dim(); ++d) phase += 2.0 * pi * k[d] * x(d) / grid.length();
    return std::cos(phase);
  });
}

double max_diff(const Field& a, const Field& b) { return (a.values() - b.values()).abs().maxCoeff(); }

// Naive O(N²) DFT multiplier in 1-D, independent of the FFT path.
Eigen::ArrayXd naive_multiplier_1d(const Eigen::ArrayXd& u, double L, double s) {
  const int N = static_cast<int>(u.size());
  std::vector<std::complex<double>> c(N);
  for (int m = 0; m < N; ++m) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < N; ++j) acc += u(j) * std::polar(1.0, -2.0 * pi * m * j / N);
    c[m] = acc;
  }
  Eigen::ArrayXd out(N);
  for (int j = 0; j < N; ++j) {
    std::complex<double> acc = 0.0;
    for (int m = 0; m < N; ++m) {
      const int k = m < N / 2 ? m : m - N;
      const double sym = std::pow(2.0 * pi * k / L, 2.0);
      const double mult = k == 0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(sym, s);
      acc += mult * c[m] * std::polar(1.0, 2.0 * pi * m * j / N);
    }
    out(j) = acc.real() / N;
  }
  return out;
}

}  // namespace

TEST_SUITE("spectral_operator") {
  TEST_CASE("symbol vanishes only on the zero mode") {
    const PeriodicGrid g(2, 6.0, 16);
    const SpectralOperator op(g);
    const auto& sym = op.symbol();
    CHECK(sym(0) == 0.0);
    CHECK((sym.tail(sym.size() - 1) > 0.0).all());
    CHECK(sym(1) == doctest::Approx(std::pow(2.0 * pi / 6.0, 2)));
    CHECK(op.degree() == 2.0);
  }

  TEST_CASE("s = 0 is the identity") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    const Field f = random_field(g, 1);
    CHECK(max_diff(apply_power(op, f, 0.0), f) <= 1e-13);
  }

  TEST_CASE("plane waves are eigenfunctions") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    const Field e = plane_wave(g, {3, 2});
    const double lam = std::pow(2.0 * pi / 5.0, 2) * 13.0;
    for (double s : {0.25, 0.5, 1.0, 1.7, -0.5}) {
      const Field r = apply_power(op, e, s);
      CHECK(max_diff(r, e.scaled(std::pow(lam, s))) <= 1e-12 * std::pow(lam, s) * 10);
    }
  }

  TEST_CASE("semigroup law on mean-zero fields") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    for (int i = 0; i < 10; ++i) {
      const Field f = random_field(g, 10 + i, true);
      Rng rng(i);
      const double s = rng.uniform(-1.0, 1.0), t = rng.uniform(-1.0, 1.0);
      const Field a = apply_power(op, apply_power(op, f, s), t);
      const Field b = apply_power(op, f, s + t);
      CHECK(max_diff(a, b) <= 1e-10 * std::max(1.0, b.values().abs().maxCoeff()));
    }
  }

  TEST_CASE("negative powers need a mean-zero input") {
    const PeriodicGrid g(1, 5.0, 32);
    const SpectralOperator op(g);
    const Field c(g, Eigen::ArrayXd::Ones(32));
    CHECK_THROWS_AS(apply_power(op, c, -0.5), PreconditionError);
    PowerInfo info;
    apply_power(op, random_field(g, 3, true), -0.5, &info);
    CHECK(info.zero_mode_dropped);
  }

  TEST_CASE("FFT multiplier matches a direct DFT") {
    const PeriodicGrid g(1, 7.0, 64);
    const SpectralOperator op(g);
    const Field f = random_field(g, 77);
    for (double s : {0.3, 0.5, 1.0, 1.5}) {
      const Eigen::ArrayXd oracle = naive_multiplier_1d(f.values(), 7.0, s);
      CHECK((apply_power(op, f, s).values() - oracle).abs().maxCoeff() <= 1e-10 * oracle.abs().maxCoeff());
    }
  }

  TEST_CASE("self-adjointness and positivity") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    for (int i = 0; i < 10; ++i) {
      const Field f = random_field(g, 100 + i), h = random_field(g, 200 + i);
      for (double s : {0.5, 1.0, 1.3}) {
        const double a = inner(apply_power(op, f, s), h), b = inner(f, apply_power(op, h, s));
        CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), 1.0));
        CHECK(inner(apply_power(op, f, s), f) >= -1e-12);
      }
    }
  }

  TEST_CASE("Riesz composition identity") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    const Field f = random_field(g, 4, true);
    const Field up = apply_power(op, apply_power(op, f, -0.4), 0.4);
    CHECK(max_diff(up, f) <= 1e-10);
  }

  TEST_CASE("Sobolev norm with the sum convention") {
    const PeriodicGrid g(1, 7.0, 64);
    const SpectralOperator op(g);
    const Field f = random_field(g, 8);
    CHECK(sobolev_norm(op, f, 0.0, 2.0) == doctest::Approx(2.0 * lp_norm(f, 2.0)).epsilon(1e-12));
    const Field e = plane_wave(g, {5});
    const double lam = std::pow(2.0 * pi * 5.0 / 7.0, 2);
    for (double p : {1.5, 2.0, 4.0})
      CHECK(sobolev_norm(op, e, 1.2, p) == doctest::Approx(lp_norm(e, p) * (1.0 + std::pow(lam, 0.6))).epsilon(1e-10));
    for (double p : {1.5, 3.0}) {
      const Field oracle(g, naive_multiplier_1d(f.values(), 7.0, 0.35));
      const auto parts = sobolev_norm_parts(op, f, 0.7, p);
      CHECK(parts.seminorm == doctest::Approx(lp_norm(oracle, p)).epsilon(1e-10));
      CHECK(parts.lp == doctest::Approx(lp_norm(f, p)).epsilon(1e-14));
    }
  }

  TEST_CASE("interpolation of homogeneous seminorms") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    for (int i = 0; i < 20; ++i) {
      const Field f = random_field(g, 300 + i, true);
      const auto rep = interpolation_check(op, f, 0.2, 1.8, 0.9, 2.0);
      CHECK(rep.contract_applies);
      CHECK(rep.rho <= 1.0 + 1e-12);
      CHECK(rep.contract_holds);
    }
    const auto eig = interpolation_check(op, plane_wave(g, {1, 2}), 0.2, 1.8, 0.9);
    CHECK(eig.rho == doctest::Approx(1.0).epsilon(1e-12));
    const Field two = Field(g, plane_wave(g, {1, 0}).values() + plane_wave(g, {6, 3}).values());
    CHECK(interpolation_check(op, two, 0.2, 1.8, 0.9).rho < 1.0 - 1e-6);
    CHECK(interpolation_check(op, two, 0.2, 1.8, 0.2 + 1e-9).rho == doctest::Approx(1.0).epsilon(1e-7));
    CHECK_THROWS_AS(interpolation_check(op, two, 1.0, 0.5, 0.7), DomainError);
    CHECK_FALSE(interpolation_check(op, two, 0.2, 1.8, 0.9, 3.0).contract_applies);
  }

  TEST_CASE("spectral cutoff") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    const Field f = random_field(g, 5);
    CHECK((spectral_cutoff(op, f).values() == f.values()).all());
    const Field zero = spectral_cutoff(op, f, 0.0);
    CHECK(max_diff(zero, Field(g, Eigen::ArrayXd::Constant(g.size(), mean(f)))) <= 1e-12);
    const Field once = spectral_cutoff(op, f, 40.0);
    const Field twice = spectral_cutoff(op, once, 40.0);
    CHECK((once.values() == twice.values()).all());
  }

  TEST_CASE("Nikolskii bound") {
    const PeriodicGrid g(2, 5.0, 32);
    const SpectralOperator op(g);
    double previous = 0.0;
    for (double cut : {5.0, 20.0, 80.0, 320.0}) {
      const double k = nikolskii_constant_l2(op, cut);
      CHECK(k >= previous);
      previous = k;
      CHECK(empirical_nikolskii_ratio(op, cut, 2.0, 20, 1) <= k * (1.0 + 1e-10));
    }
    // The Dirichlet kernel of the kept modes attains the bound.
    const double cut = 20.0;
    Eigen::ArrayXcd spec = Eigen::ArrayXcd::Zero(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
      if (op.symbol()(i) <= cut) spec(i) = 1.0;
    const Field d(g, inverse_transform(g, spec));
    CHECK(d.values().abs().maxCoeff() / lp_norm(d, 2.0) == doctest::Approx(nikolskii_constant_l2(op, cut)).epsilon(1e-10));
  }
}
