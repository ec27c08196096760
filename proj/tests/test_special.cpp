#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kssvar/quadrature.hpp"
#include "kssvar/special.hpp"

using namespace kssvar;
using std::numbers::pi;

TEST_CASE("chi moments") {
  CHECK(m_kj(1, 1) == doctest::Approx(std::sqrt(2 / pi)).epsilon(1e-14));
  CHECK(m_kj(3, 1) == doctest::Approx(2 * std::sqrt(2 / pi)).epsilon(1e-14));
  for (unsigned k = 1; k <= 8; ++k) CHECK(m_kj(k, 2) == doctest::Approx(double(k)).epsilon(1e-13));
  CHECK(m_kj(2, 1) == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-14));
}

TEST_CASE("noncentral chi mean") {
  // k = 1: E|x + l| = sqrt(2/pi) e^{-l^2/2} + l (1 - 2 Phi(-l))
  for (double l : {0.0, 0.3, 1.0, 4.0, 12.0, 35.0}) {
    const double exact = std::sqrt(2 / pi) * std::exp(-0.5 * l * l) + l * std::erf(l / std::sqrt(2.0));
    CHECK(noncentral_chi_mean(1, l) == doctest::Approx(exact).epsilon(1e-12));
  }
  // k = 3: against quadrature of the noncentral chi_3 density
  for (double l : {0.5, 2.0, 8.0, 40.0}) {
    const auto qn = quad::adaptive(
        [l](double r) { return r / l * std::sqrt(2 / pi) * std::exp(-0.5 * (r - l) * (r - l)) * 0.5 * (1 - std::exp(-2 * r * l)); },
        0.0, l + 40.0, 1e-13, 1e-14);
    const double mean = quad::adaptive(
                            [l](double r) {
                              return r * r / l * std::sqrt(2 / pi) * std::exp(-0.5 * (r - l) * (r - l)) * 0.5 *
                                     (1 - std::exp(-2 * r * l));
                            },
                            0.0, l + 40.0, 1e-13, 1e-14)
                            .value;
    CHECK(qn.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(noncentral_chi_mean(3, l) == doctest::Approx(mean).epsilon(1e-10));
  }
  CHECK(noncentral_chi_mean(4, 0.0) == doctest::Approx(m_kj(4, 1)).epsilon(1e-13));
}

TEST_CASE("mixed norm mean") {
  for (double c : {0.0, 0.5, 1.0, 3.0, -2.0}) {
    CHECK(mixed_norm_mean(1, c).value == doctest::Approx(mixed_norm_mean_k1(c)).epsilon(1e-10));
  }
  CHECK(mixed_norm_mean(3, 0.0).value == doctest::Approx(m_kj(3, 1) * m_kj(3, 1)).epsilon(1e-10));
  // k = 1, c = 1 against a large Monte Carlo sample
  const auto mc = mixed_norm_mean_mc(1, 1.0, 2000000, 3);
  CHECK(std::fabs(mc.value - mixed_norm_mean(1, 1.0).value) < 3 * mc.error);
  const auto mc2 = mixed_norm_mean_mc(2, 0.7, 1000000, 4);
  CHECK(std::fabs(mc2.value - mixed_norm_mean(2, 0.7).value) < 3 * mc2.error);
  // correlated form: k at |rho| = 1, m_{k,1}^2 at rho = 0
  CHECK(correlated_norm_mean(2, 1.0).value == doctest::Approx(2.0));
  CHECK(correlated_norm_mean(2, 0.0).value == doctest::Approx(m_kj(2, 1) * m_kj(2, 1)).epsilon(1e-10));
}

TEST_CASE("adaptive quadrature") {
  const auto q = quad::adaptive([](double x) { return std::exp(-x * x); }, 0.0, 10.0, 1e-14);
  CHECK(q.converged);
  CHECK(q.value == doctest::Approx(0.5 * std::sqrt(pi)).epsilon(1e-13));
  const auto r = quad::adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(r.value == doctest::Approx(2.0 / 3).epsilon(1e-11));
  CHECK(quad::on_partition([](double x) { return std::sqrt(x); }, r.partition) == doctest::Approx(r.value).epsilon(1e-15));
  const auto bad = quad::adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12, 0.0, 50);
  CHECK_FALSE(bad.converged);
}

TEST_CASE("Gauss rules") {
  const auto gh = quad::gauss_hermite(30);
  double s0 = 0, s2 = 0, s4 = 0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double x = gh.nodes[i];
    s0 += gh.weights[i];
    s2 += gh.weights[i] * x * x;
    s4 += gh.weights[i] * x * x * x * x;
  }
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s4 == doctest::Approx(3.0).epsilon(1e-13));
  const auto gl = quad::gauss_legendre(10, 0.0, 2.0);
  double t = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) t += gl.weights[i] * std::pow(gl.nodes[i], 19);
  CHECK(t == doctest::Approx(std::pow(2.0, 20) / 20).epsilon(1e-13));
}

TEST_CASE("natural cubic spline") {
  std::vector<double> x, y;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(0.1 * i);
    y.push_back(std::sin(0.1 * i));
  }
  const quad::CubicSpline s(x, y);
  CHECK(s(0.1 * 7) == doctest::Approx(std::sin(0.7)).epsilon(1e-15));
  CHECK(std::fabs(s(1.234) - std::sin(1.234)) < 1e-5);
  CHECK_THROWS(quad::CubicSpline({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}));
}
