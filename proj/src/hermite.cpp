#include "kssvar/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "kssvar/linalg.hpp"
#include "kssvar/quadrature.hpp"
#include "kssvar/rng.hpp"

namespace kssvar::hermite {

double hermite_eval(unsigned n, double x) {
  if (n == 0) return 1.0;
  double h0 = 1.0, h1 = x;
  for (unsigned k = 1; k < n; ++k) {
    const double h2 = x * h1 - k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double b_coefficient(std::span<const unsigned> alpha) {
  double b = 1.0;
  for (unsigned a : alpha) {
    if (a % 2 != 0) return 0.0;
    const unsigned j = a / 2;
    b *= std::pow(-0.5, j) / std::tgamma(j + 1.0) / std::sqrt(2.0 * std::numbers::pi);
  }
  return b;
}

double b_epsilon(std::span<const unsigned> alpha, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("b_epsilon: eps must be positive");
  const auto rule = quad::gauss_legendre(64, -eps, eps);
  double b = 1.0;
  for (unsigned a : alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i];
      s += rule.weights[i] * hermite_eval(a, x) * std::exp(-0.5 * x * x);
    }
    b *= s / (2.0 * eps) / std::sqrt(2.0 * std::numbers::pi) / std::tgamma(a + 1.0);
  }
  return b;
}

DetSample::DetSample(unsigned m, std::uint64_t n, std::uint64_t seed) : m_(m), n_(n), seed_(seed) {
  if (m == 0) throw std::invalid_argument("DetSample: m must be >= 1");
  if (n < 2) throw std::invalid_argument("DetSample: need n >= 2");
  orbit_ = m * m * (1u << m);
}

template <class F>
Estimate DetSample::average(F&& per_matrix) const {
  const unsigned m = m_;
  std::vector<double> y(m * m), w(m * m);
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t s = 0; s < n_; ++s) {
    CounterStream rs(seed_, s);
    for (double& v : y) v = rs.normal();
    double acc = 0.0;
    for (unsigned rsh = 0; rsh < m; ++rsh)
      for (unsigned csh = 0; csh < m; ++csh)
        for (unsigned flips = 0; flips < (1u << m); ++flips) {
          for (unsigned r = 0; r < m; ++r) {
            const double sign = (flips >> r) & 1u ? -1.0 : 1.0;
            for (unsigned c = 0; c < m; ++c) w[r * m + c] = sign * y[((r + rsh) % m) * m + (c + csh) % m];
          }
          acc += per_matrix(std::span<const double>(w));
        }
    const double v = acc / orbit_;
    sum += v;
    sum2 += v * v;
  }
  const double nd = static_cast<double>(n_);
  const double mean = sum / nd;
  const double var = std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd)};
}

Estimate DetSample::f_coefficient(std::span<const unsigned> beta) const {
  if (beta.size() != static_cast<std::size_t>(m_) * m_)
    throw std::invalid_argument("f_coefficient: beta must have m^2 entries");
  unsigned total = 0;
  double fact = 1.0;
  for (unsigned b : beta) {
    total += b;
    fact *= std::tgamma(b + 1.0);
  }
  if (total > 6) throw std::invalid_argument("f_coefficient: |beta| <= 6 required");
  const unsigned m = m_;
  Estimate e = average([&](std::span<const double> w) {
    double h = 1.0;
    for (std::size_t i = 0; i < beta.size(); ++i)
      if (beta[i] != 0) h *= hermite_eval(beta[i], w[i]);
    return std::fabs(determinant(w, m)) * h;
  });
  return {e.value / fact, e.error / fact};
}

Estimate DetSample::mean_abs_det() const {
  const unsigned m = m_;
  return average([&](std::span<const double> w) { return std::fabs(determinant(w, m)); });
}

Estimate f_coefficient(std::span<const unsigned> beta, unsigned m, std::uint64_t n, std::uint64_t seed) {
  return DetSample(m, n, seed).f_coefficient(beta);
}

FTilde f_tilde_22(unsigned m, std::uint64_t n, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("f_tilde_22: m must be >= 1");
  if (n < 2) throw std::invalid_argument("f_tilde_22: need n >= 2");
  // |det| (||y||^2 - m^2) / m^2 per draw; the statistic is already symmetric, no orbit needed.
  const double m2 = static_cast<double>(m) * m;
  std::vector<double> y(m * m);
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t s = 0; s < n; ++s) {
    CounterStream rs(seed, s);
    double fro = 0.0;
    for (double& v : y) {
      v = rs.normal();
      fro += v * v;
    }
    const double v = std::fabs(determinant(y, m)) * (fro - m2) / m2;
    sum += v;
    sum2 += v * v;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  const double se = std::sqrt(std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0)) / nd);
  FTilde f;
  f.display = {mean, se};
  f.coefficient = {0.5 * mean, 0.5 * se};
  return f;
}

I2dResult i2d_lower_bound(unsigned d, unsigned m, const kacrice::QuadratureSpec& spec, std::uint64_t n_mc,
                          std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("i2d_lower_bound: d must be >= 2");
  if (m == 0) throw std::invalid_argument("i2d_lower_bound: m must be >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  auto f = [&](double z) {
    const auto k = kacrice::scaled_kernel(z, d);
    const double r = m == 1 ? k.b : k.dd;
    const double w = m == 1 ? 1.0 : std::pow(sd * std::sin(z / sd), m - 1.0);
    return w * r * r;
  };
  const auto q = quad::adaptive(f, 0.0, 0.5 * sd * std::numbers::pi, spec.abs_tol, spec.rel_tol, spec.max_intervals);
  if (!q.converged) throw std::runtime_error("i2d_lower_bound: quadrature did not converge");
  const FTilde ft = f_tilde_22(m, n_mc, seed);
  const double b0m = std::pow(2.0 * std::numbers::pi, -0.5 * m);
  const double scale = b0m * b0m * kappa(m) * kappa(m - 1) * q.value;
  auto bound = [&](const Estimate& e) {
    return Estimate{scale * e.value * e.value, scale * 2.0 * std::fabs(e.value) * e.error};
  };
  I2dResult r;
  r.value = bound(ft.coefficient);
  r.value_display = bound(ft.display);
  r.integral = q.value;
  r.quadrature_error = q.error;
  return r;
}

Estimate mehler_check(double rho, std::uint64_t n, std::uint64_t seed) {
  if (!(std::fabs(rho) <= 1.0)) throw std::invalid_argument("mehler_check: |rho| must be <= 1");
  if (n < 2) throw std::invalid_argument("mehler_check: need n >= 2");
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    CounterStream rs(seed, i);
    const double xi = rs.normal();
    const double eta = rho * xi + s * rs.normal();
    const double v = hermite_eval(2, xi) * hermite_eval(2, eta);
    sum += v;
    sum2 += v * v;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  return {mean, std::sqrt(std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0)) / nd)};
}

std::vector<std::vector<unsigned>> multi_indices(unsigned entries, unsigned max_order) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(entries, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned left) {
    if (pos == entries) {
      out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  rec(0, max_order);
  return out;
}

}  // namespace kssvar::hermite
