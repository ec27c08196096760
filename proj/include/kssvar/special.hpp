#pragma once

#include <cstdint>

namespace kssvar {

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // standard error (Monte Carlo) or quadrature error bound
};

/// E ||xi_k||^j for xi_k standard normal in R^k: 2^{j/2} Gamma((j+k)/2) / Gamma(k/2).
double m_kj(unsigned k, double j);

/// Surface measure of the unit sphere S^m in R^{m+1}: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double kappa(unsigned m);

/// E ||eta + lambda e_1|| for eta standard normal in R^k (noncentral chi mean).
/// Positive Kummer series with an explicit tail bound; asymptotic expansion for lambda > 30.
double noncentral_chi_mean(unsigned k, double lambda);

/// E[ ||xi|| * ||eta + c xi|| ] for independent standard normal xi, eta in R^k.
/// Reduced to one dimension over r = ||xi|| against the chi_k density.
Estimate mixed_norm_mean(unsigned k, double c, double tol = 1e-12);

/// E[ ||xi|| * ||rho xi + sqrt(1 - rho^2) eta|| ], |rho| <= 1. Equals sqrt(1-rho^2) times the
/// previous function at c = rho / sqrt(1 - rho^2), and k at |rho| = 1.
Estimate correlated_norm_mean(unsigned k, double rho, double tol = 1e-12);

/// Plain Monte Carlo estimate of mixed_norm_mean with antithetic eta.
Estimate mixed_norm_mean_mc(unsigned k, double c, std::uint64_t n, std::uint64_t seed);

/// Closed form for k = 1 at c: (2/pi)(1 + c arctan c). Used as a check.
double mixed_norm_mean_k1(double c);

}  // namespace kssvar
