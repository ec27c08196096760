#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "kssvar/gaussian_matrix.hpp"
#include "kssvar/kacrice.hpp"
#include "kssvar/quadrature.hpp"
#include "kssvar/rng.hpp"
#include "kssvar/special.hpp"
#include "kssvar/stats.hpp"
#include "oracles.hpp"

using namespace kssvar;
using namespace kssvar::kacrice;
using std::numbers::pi;

TEST_CASE("kernel at the coincidence point") {
  const auto k = scaled_kernel(0.0, 10);
  CHECK(k.a == 0.0);
  CHECK(k.b == 1.0);
  CHECK(k.c == 1.0);
  CHECK(k.dd == 1.0);
  CHECK_THROWS(scaled_kernel(-0.1, 10));
  CHECK_THROWS(scaled_kernel(std::sqrt(10.0) * pi + 0.01, 10));
}

TEST_CASE("kernel ranges and positive semidefinite conditional covariance") {
  for (unsigned d : {2u, 3u, 7u, 20u, 101u, 1000u}) {
    const double zmax = std::sqrt(double(d)) * pi;
    for (int i = 1; i < 400; ++i) {
      const auto k = scaled_kernel(zmax * i / 400.0, d);
      CHECK(k.sigma_sq >= 0.0);
      CHECK(k.sigma_sq <= 1.0);
      CHECK(std::fabs(k.rho) <= 1.0);
      for (unsigned m : {1u, 2u, 3u}) CHECK(conditional_covariance(k, m).is_psd());
    }
  }
}

TEST_CASE("conditional covariance is the Schur complement of the joint covariance") {
  for (unsigned d : {3u, 8u, 40u}) {
    for (double z : {0.3, 0.9, 1.7, 2.5}) {
      const unsigned m = 3;
      const auto k = scaled_kernel(z, d);
      const Matrix s = joint_covariance(k, m);
      const std::size_t n = 2 * m;
      Matrix s11(2, 2), s11i;
      s11(0, 0) = s(0, 0);
      s11(0, 1) = s(0, 1);
      s11(1, 0) = s(1, 0);
      s11(1, 1) = s(1, 1);
      REQUIRE(invert(s11, s11i));
      const Matrix cc = conditional_covariance(k, m).full();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double v = s(2 + i, 2 + j);
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) v -= s(2 + i, a) * s11i(a, b) * s(b, 2 + j);
          // joint is ordered (Y'(s)_1..m, Y'(t)_1..m) after the values, as is full()
          CHECK(std::fabs(v - cc(i, j)) < 1e-10);
        }
    }
  }
}

TEST_CASE("near-zero series agree with 50-digit arithmetic") {
  using R = boost::multiprecision::cpp_bin_float_50;
  for (unsigned d : {2u, 5u, 30u, 1000u}) {
    const double z0 = 0.05 * std::min(1.0, std::sqrt(double(d)));
    for (double f : {0.2, 0.5, 0.9, 0.999}) {
      const double z = f * z0;
      const auto k = scaled_kernel(z, d);
      const R psi = R(z) / sqrt(R(d)), co = cos(psi), si = sin(psi), ld = d;
      const R a = -sqrt(ld) * pow(co, ld - 1) * si;
      const R b = pow(co, ld) - (ld - 1) * pow(co, ld - 2) * si * si;
      const R c = pow(co, ld);
      const R oc = 1 - c * c, num = oc - a * a;
      CHECK(std::fabs(k.sigma_sq - static_cast<double>(num / oc)) < 1e-15);
      CHECK(std::fabs(k.rho - static_cast<double>((b * oc - a * a * c) / num)) < 1e-14);
    }
  }
}

TEST_CASE("kernel parity under psi -> pi - psi") {
  for (unsigned d : {4u, 5u, 50u, 51u}) {
    const double zmax = std::sqrt(double(d)) * pi;
    const double sg = d % 2 == 0 ? 1.0 : -1.0;
    for (double f : {0.001, 0.1, 0.3, 0.45}) {
      const auto k1 = scaled_kernel(f * zmax, d), k2 = scaled_kernel((1 - f) * zmax, d);
      CHECK(k2.c == doctest::Approx(sg * k1.c).epsilon(1e-9));
      CHECK(k2.dd == doctest::Approx(-sg * k1.dd).epsilon(1e-9));
      CHECK(k2.rho == doctest::Approx(sg * k1.rho).epsilon(1e-7));
      CHECK(k2.sigma_sq == doctest::Approx(k1.sigma_sq).epsilon(1e-9));
    }
  }
}

TEST_CASE("decay bounds with alpha = 0.4 for d > 16") {
  const double alpha = 0.4;
  double worst = 0.0;  // sup (1 - sigma^2) exp(2 alpha z^2)
  for (unsigned i = 0; i < 10; ++i) {
    const unsigned d = 17 + i * i * 40;
    const double zmax = 0.5 * pi * std::sqrt(double(d));
    for (int j = 1; j <= 50; ++j) {
      const double z = zmax * j / 50.0;
      const auto k = scaled_kernel(z, d);
      const double e = std::exp(-alpha * z * z);
      CHECK(k.c <= k.dd + 1e-15);
      CHECK(k.dd <= e + 1e-15);
      CHECK(std::fabs(k.a) <= z * e + 1e-15);
      CHECK(std::fabs(k.b) <= (1 + z * z) * e + 1e-15);
      CHECK(1 - k.sigma_sq >= 0.0);
      worst = std::max(worst, (1 - k.sigma_sq) * std::exp(2 * alpha * z * z));
    }
  }
  CHECK(worst < 2.0);
}

TEST_CASE("variance integrand is symmetric about the equator of the pair angle") {
  GFunction g1 = [](const ScaledKernel& k) { return g_exact_m1(k.rho); };
  const std::vector<std::pair<double, double>> dummy;
  for (unsigned d : {6u, 7u, 40u}) {
    const double zmax = std::sqrt(double(d)) * pi;
    for (double f : {0.01, 0.1, 0.25, 0.4}) {
      const double a = variance_integrand(f * zmax, d, 1, g1);
      const double b = variance_integrand((1 - f) * zmax, d, 1, g1);
      CHECK(std::fabs(a - b) < 1e-10 * (1 + std::fabs(a)));
    }
    // m = 2 with a G estimate that is exactly even in (rho, D)
    GFunction g2 = [](const ScaledKernel& k) { return g_functional(k.rho, k.dd, 2, 2000, 3).value; };
    for (double f : {0.05, 0.2, 0.35}) {
      const double a = variance_integrand(f * zmax, d, 2, g2);
      const double b = variance_integrand((1 - f) * zmax, d, 2, g2);
      CHECK(std::fabs(a - b) < 1e-9 * (1 + std::fabs(a)));
    }
  }
}

TEST_CASE("G functional identities") {
  // m = 1 closed form against Monte Carlo
  for (double rho : {-0.8, 0.0, 0.4}) {
    const auto e = g_functional(rho, 0.0, 1, 200000, 9, false);
    CHECK(std::fabs(e.value - g_exact_m1(rho)) < 3 * e.error);
  }
  CHECK(g_exact_m1(0.0) == doctest::Approx(2 / pi));
  CHECK(g_exact_m1(1.0) == doctest::Approx(1.0));
  CHECK(g_exact_m1(-1.0) == doctest::Approx(1.0));
  for (unsigned m : {1u, 2u, 3u}) {
    const auto g0 = g_functional(0.0, 0.0, m, 200000, 10 + m, false);
    CHECK(std::fabs(g0.value - g_at_origin(m)) < 3 * g0.error);
    const auto g1 = g_functional(1.0, 1.0, m, 200000, 20 + m, false);
    CHECK(std::fabs(g1.value - std::tgamma(m + 1.0)) < 3 * g1.error);
    // control variate is unbiased
    const auto gc = g_functional(-0.3, 0.6, m, 200000, 30 + m);
    const auto gp = g_functional(-0.3, 0.6, m, 200000, 30 + m, false);
    CHECK(std::fabs(gc.value - gp.value) < 3 * gp.error);
  }
  CHECK(g_at_origin(2) == doctest::Approx(1.0));
}

TEST_CASE("G is Lipschitz at the origin") {
  // |G(rho, D) - G(0, 0)| <= C (|rho| + |D|) with the fitted C; with common draws the
  // control-variate estimate varies smoothly, so the ratio is bounded on the grid.
  double c = 0.0;
  std::vector<std::pair<double, double>> nodes;
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j)
      if (i || j) nodes.emplace_back(0.225 * i, 0.225 * j);
  const auto est = g_functional_grid(nodes, 2, 20000, 4);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = std::fabs(est[i].value - g_at_origin(2)) / (std::fabs(nodes[i].first) + std::fabs(nodes[i].second));
    c = std::max(c, r);
  }
  CHECK(c < 1.5);
}

TEST_CASE("sphere measure constants and the pair reduction") {
  CHECK(kappa(0) == doctest::Approx(2.0));
  CHECK(kappa(1) == doctest::Approx(2 * pi));
  CHECK(kappa(2) == doctest::Approx(4 * pi));
  // int_{(S^1)^2} 1 = kappa_1^2 through the reduced one-dimensional integral
  const auto q = quad::adaptive([](double) { return 1.0; }, 0.0, pi, 1e-12);
  CHECK(kappa(1) * kappa(0) * q.value == doctest::Approx(kappa(1) * kappa(1)));
  // int_{(S^2)^2} 1 with the sin weight
  const auto q2 = quad::adaptive([](double p) { return std::sin(p); }, 0.0, pi, 1e-12);
  CHECK(kappa(2) * kappa(1) * q2.value == doctest::Approx(kappa(2) * kappa(2)));
}

TEST_CASE("m = 1, d = 2 closed form") {
  // N is 0 or 2 with P(N = 2) = 1/sqrt 2, so Var/sqrt 2 = 2 - sqrt 2.
  const auto r = variance_finite_d(2, 1);
  CHECK(r.value == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("second factorial moment identity") {
  for (unsigned d : {3u, 10u, 100u}) {
    const auto r = variance_finite_d(d, 1);
    CHECK(r.converged);
    const double lhs = 0.25 * (r.second_factorial_moment - 4 * std::sqrt(double(d))) + 0.5;
    CHECK(lhs == doctest::Approx(r.value).epsilon(1e-10));
  }
}

TEST_CASE("second factorial moment against a two-dimensional Rice integral, m = 1, d = 10") {
  // Unreduced integrand over (theta1, theta2) in [0, 2 pi)^2 from r = cos^d(theta1 - theta2),
  // with the conditional law obtained by numerical regression.
  const int d = 10;
  auto f = [d](double dl) { return std::pow(std::cos(dl), d); };
  auto f1 = [d](double dl) { return -d * std::pow(std::cos(dl), d - 1) * std::sin(dl); };
  auto f2 = [d](double dl) {
    const double c = std::cos(dl), s = std::sin(dl);
    return d * (d - 1.0) * std::pow(c, d - 2) * s * s - d * std::pow(c, d);
  };
  auto integrand = [&](double t1, double t2) {
    const double dl = t1 - t2;
    const double r = f(dl), r1 = f1(dl), r2 = f2(dl);
    Matrix s11(2, 2), inv;
    s11(0, 0) = s11(1, 1) = 1.0;
    s11(0, 1) = s11(1, 0) = r;
    if (!invert(s11, inv)) return 0.0;
    // rows: Y'(t1), Y'(t2); columns: Y(t1), Y(t2)
    const double s21[2][2] = {{0.0, r1}, {-r1, 0.0}};
    double c[2][2] = {{double(d), -r2}, {-r2, double(d)}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) c[i][j] -= s21[i][a] * inv(a, b) * s21[j][b];
    const double sx = std::sqrt(std::max(c[0][0], 0.0)), sz = std::sqrt(std::max(c[1][1], 0.0));
    if (sx == 0 || sz == 0) return 0.0;
    const double rho = std::clamp(c[0][1] / (sx * sz), -1.0, 1.0);
    const double e = 2 / pi * sx * sz * (std::sqrt(1 - rho * rho) + rho * std::asin(rho));
    return e / (2 * pi * std::sqrt(1 - r * r));
  };
  // Tensor Gauss-Legendre, panels split where the integrand has kinks (t2 = t1, t1 + pi).
  const auto gl = quad::gauss_legendre(40);
  const int panels = 16;
  double total = 0.0;
  for (int p = 0; p < 8; ++p) {
    const double a1 = 2 * pi * p / 8, b1 = 2 * pi * (p + 1) / 8;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t1 = 0.5 * (a1 + b1) + 0.5 * (b1 - a1) * gl.nodes[i];
      const double w1 = 0.5 * (b1 - a1) * gl.weights[i];
      double inner = 0.0;
      for (int q = 0; q < panels; ++q) {
        const double a2 = t1 + pi * q / 8, b2 = t1 + pi * (q + 1) / 8;  // covers [t1, t1 + 2 pi)
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
          const double t2 = 0.5 * (a2 + b2) + 0.5 * (b2 - a2) * gl.nodes[j];
          inner += 0.5 * (b2 - a2) * gl.weights[j] * integrand(t1, t2);
        }
      }
      total += w1 * inner;
    }
  }
  const double two_d = total / std::sqrt(double(d));
  const auto r = variance_finite_d(d, 1);
  // the one-dimensional route also carries the antipodal pairs, which contribute 2
  CHECK(std::fabs((r.second_factorial_moment - 2.0) - two_d) < 1e-4 * two_d);
}

TEST_CASE("integrand tail decay for d >= 100") {
  GFunction g1 = [](const ScaledKernel& k) { return g_exact_m1(k.rho); };
  for (unsigned d : {100u, 1000u}) {
    double peak = 0.0;
    for (int i = 1; i <= 1000; ++i) peak = std::max(peak, std::fabs(variance_integrand(10.0 * i / 1000, d, 1, g1)));
    const double zmax = 0.5 * pi * std::sqrt(double(d));
    for (double z = 10.0; z < zmax; z += 0.5) CHECK(std::fabs(variance_integrand(z, d, 1, g1)) < 1e-6 * peak);
  }
}

TEST_CASE("m = 2 finite-degree variance against the resultant oracle at d = 2") {
  QuadratureSpec q;
  q.g_samples = 200000;
  q.g_nodes = 60;
  const auto r = variance_finite_d(2, 2, q, 5);
  std::vector<double> counts;
  for (int i = 0; i < 200000; ++i) counts.push_back(oracle::resultant_count_m2d2(sample_system(2, 2, derive_seed(6, i))));
  const auto s = summarize(counts);
  CHECK(std::fabs(s.variance / 2 - r.value) < 3 * std::hypot(s.se_variance / 2, r.mc_error));
  CHECK(std::fabs(s.mean / 2 - 1.0) < 3 * s.se_mean / 2);
}

TEST_CASE("kernel is finite at the quarter turn") {
  for (unsigned d = 2; d < 20000; d = d * 3 / 2 + 1) {
    const double zq = 0.5 * std::sqrt(double(d)) * pi;
    for (double z : {std::nextafter(zq, 0.0), zq, std::nextafter(zq, 1e9), zq * 50 / 50.0}) {
      const auto k = scaled_kernel(z, d);
      CHECK(std::isfinite(k.a));
      CHECK(std::isfinite(k.b));
      CHECK(std::isfinite(k.sigma_sq));
      CHECK(std::isfinite(k.rho));
      CHECK(std::fabs(k.c) < 1e-15);
    }
  }
}
