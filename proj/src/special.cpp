#include "kssvar/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kssvar/quadrature.hpp"
#include "kssvar/rng.hpp"

namespace kssvar {

double m_kj(unsigned k, double j) {
  if (k == 0) throw std::invalid_argument("m_kj: k must be >= 1");
  const double kd = k;
  return std::exp(0.5 * j * std::numbers::ln2 + std::lgamma(0.5 * (j + kd)) - std::lgamma(0.5 * kd));
}

double kappa(unsigned m) {
  const double h = 0.5 * (m + 1.0);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - std::lgamma(h));
}

double noncentral_chi_mean(unsigned k, double lambda) {
  if (k == 0) throw std::invalid_argument("noncentral_chi_mean: k must be >= 1");
  lambda = std::fabs(lambda);
  const double kd = k;
  if (lambda > 30.0) {
    // lambda * sum_n (-1/2)_n ((1-k)/2)_n / n! (2/lambda^2)^n, stopped at the smallest term
    const double q = 2.0 / (lambda * lambda);
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 60; ++n) {
      const double next = term * (-0.5 + n) * (0.5 * (1.0 - kd) + n) / (n + 1.0) * q;
      if (std::fabs(next) >= std::fabs(term) || next == 0.0) break;
      term = next;
      sum += term;
      if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return lambda * sum;
  }
  // sqrt(2) Gamma((k+1)/2)/Gamma(k/2) * e^{-x} 1F1((k+1)/2; k/2; x), x = lambda^2/2
  const double x = 0.5 * lambda * lambda;
  const double a = 0.5 * (kd + 1.0), b = 0.5 * kd;
  double term = std::exp(-x), sum = term;
  for (int n = 0;; ++n) {
    term *= (a + n) / ((b + n) * (n + 1.0)) * x;
    sum += term;
    // term ratio <= 2x/(n+2) for all later terms; once that is <= 1/2 the tail is <= term
    if (n + 2 >= 4.0 * x && term <= 1e-17 * sum) break;
    if (n > 100000) throw std::runtime_error("noncentral_chi_mean: series did not converge");
  }
  return std::numbers::sqrt2 * std::exp(std::lgamma(a) - std::lgamma(b)) * sum;
}

Estimate mixed_norm_mean(unsigned k, double c, double tol) {
  if (k == 0) throw std::invalid_argument("mixed_norm_mean: k must be >= 1");
  const double kd = k;
  const double log_norm = (0.5 * kd - 1.0) * std::numbers::ln2 + std::lgamma(0.5 * kd);
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double dens = std::exp((kd - 1.0) * std::log(r) - 0.5 * r * r - log_norm);
    return r * noncentral_chi_mean(k, c * r) * dens;
  };
  const double upper = std::sqrt(kd) + 14.0;
  const auto q = quad::adaptive(f, 0.0, upper, tol, tol);
  if (!q.converged) throw std::runtime_error("mixed_norm_mean: quadrature did not converge");
  return {q.value, q.error};
}

Estimate correlated_norm_mean(unsigned k, double rho, double tol) {
  if (!(std::fabs(rho) <= 1.0)) throw std::invalid_argument("correlated_norm_mean: |rho| must be <= 1");
  const double s2 = (1.0 - rho) * (1.0 + rho);
  if (s2 == 0.0) return {static_cast<double>(k), 0.0};
  const double s = std::sqrt(s2);
  const Estimate e = mixed_norm_mean(k, rho / s, tol);
  return {s * e.value, s * e.error};
}

Estimate mixed_norm_mean_mc(unsigned k, double c, std::uint64_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("mixed_norm_mean_mc: need n >= 2");
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> xi(k), eta(k);
  for (std::uint64_t i = 0; i < n; ++i) {
    CounterStream rs(seed, i);
    double nx = 0.0;
    for (unsigned j = 0; j < k; ++j) {
      xi[j] = rs.normal();
      nx += xi[j] * xi[j];
    }
    for (unsigned j = 0; j < k; ++j) eta[j] = rs.normal();
    double p = 0.0, m = 0.0;
    for (unsigned j = 0; j < k; ++j) {
      p += (eta[j] + c * xi[j]) * (eta[j] + c * xi[j]);
      m += (-eta[j] + c * xi[j]) * (-eta[j] + c * xi[j]);
    }
    const double v = 0.5 * std::sqrt(nx) * (std::sqrt(p) + std::sqrt(m));
    sum += v;
    sum2 += v * v;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  const double var = std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd)};
}

double mixed_norm_mean_k1(double c) { return 2.0 / std::numbers::pi * (1.0 + c * std::atan(c)); }

}  // namespace kssvar
