#include <cmath>

#include "doctest.h"
#include "kssvar/asymptotics.hpp"
#include "kssvar/kacrice.hpp"

using namespace kssvar;
using namespace kssvar::asymptotics;

TEST_CASE("limit kernel end points") {
  CHECK(sigma_bar_sq(1e-4) < 1e-8);
  CHECK(rho_bar(1e-4) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(sigma_bar_sq(30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(rho_bar(30.0)) < 1e-12);
  for (double t = 0.01; t < 10; t *= 1.3) {
    CHECK(sigma_bar_sq(t) > 0.0);
    CHECK(sigma_bar_sq(t) <= 1.0);
    CHECK(std::fabs(rho_bar(t)) <= 1.0);
  }
}

TEST_CASE("series and direct forms join at the cut") {
  const double lo = 0.05 * (1 - 1e-9), hi = 0.05 * (1 + 1e-9);
  CHECK(sigma_bar_sq(lo) == doctest::Approx(sigma_bar_sq(hi)).epsilon(1e-8));
  CHECK(rho_bar(lo) == doctest::Approx(rho_bar(hi)).epsilon(1e-10));
}

TEST_CASE("finite-degree kernel tends to the limit kernel") {
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto k = kacrice::scaled_kernel(t, 1000000);
    const double e = std::exp(-0.5 * t * t);
    CHECK(std::fabs(k.a + t * e) < 1e-3);
    CHECK(std::fabs(k.b - (1 - t * t) * e) < 1e-3);
    CHECK(std::fabs(k.c - e) < 1e-4);
    CHECK(std::fabs(k.sigma_sq - sigma_bar_sq(t)) < 1e-3);
    CHECK(std::fabs(k.rho - rho_bar(t)) < 1e-3);
  }
}

TEST_CASE("M_k by quadrature and Monte Carlo") {
  for (unsigned m : {2u, 3u}) {
    for (unsigned k = 1; k <= m; ++k) {
      const auto q = big_m_k(k, 1.0, m);
      const auto mc = big_m_k(k, 1.0, m, Method::mc, 1000000, 7 + k);
      CHECK(std::fabs(q.value - mc.value) < 3 * std::hypot(q.error, mc.error));
    }
  }
  // t -> infinity: M_k -> m_{k,1}^2
  CHECK(big_m_k(2, 12.0, 3).value == doctest::Approx(m_kj(2, 1) * m_kj(2, 1)).epsilon(1e-8));
  // monotone in the size of the mixing constant, which decreases in t for k < m
  double prev = 1e300;
  for (double t = 0.2; t < 6; t += 0.2) {
    const double v = big_m_k(1, t, 2).value;
    CHECK(v <= prev);
    prev = v;
  }
  const auto li = ingredients(3, 0.8);
  CHECK(li.m_k1.size() == 3);
  CHECK(li.big_m.size() == 3);
}

TEST_CASE("limit variance for m = 1") {
  const auto p = v_infinity(1, {.route = Route::product});
  const auto d = v_infinity(1, {.route = Route::direct});
  CHECK(p.value == doctest::Approx(d.value).epsilon(1e-12));
  CHECK(p.value == doctest::Approx(0.571731).epsilon(2e-6));
  CHECK(p.quadrature_error < 1e-8);
}

TEST_CASE("limit integrand vanishes at the origin and in the tail") {
  // t^{m-1}[sigma^2 (1-e^{-t^2})^{-m/2} G - G00] for m = 1 with the exact G
  auto f = [](double t) {
    const double s = sigma_bar_sq(t) * std::pow(-std::expm1(-t * t), -0.5);
    const double r = rho_bar(t);
    const double g = 2 / M_PI * (std::sqrt(1 - r * r) + r * std::asin(r));
    return s * g - 2 / M_PI;
  };
  CHECK(std::fabs(f(1e-3) + 2 / M_PI) < 1e-2);  // -> -G00 times t^0
  CHECK(std::fabs(f(8.0)) < 1e-10);
}

TEST_CASE("m = 2 direct route") {
  const auto d = v_infinity(2, {.route = Route::direct, .g_samples = 100000});
  CHECK(d.value > 0.5);
  CHECK(d.mc_error < 0.02);
}
