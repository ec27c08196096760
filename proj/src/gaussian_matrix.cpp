#include "kssvar/gaussian_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kssvar/linalg.hpp"
#include "kssvar/rng.hpp"

namespace kssvar {

void gaussian_matrix_pair(unsigned m, std::uint64_t seed, std::uint64_t index, std::span<double> x,
                          std::span<double> y) {
  CounterStream rs(seed, index);
  for (unsigned i = 0; i < m * m; ++i) x[i] = rs.normal();
  for (unsigned i = 0; i < m * m; ++i) y[i] = rs.normal();
}

std::vector<Estimate> g_functional_grid(std::span<const std::pair<double, double>> nodes, unsigned m,
                                        std::uint64_t n, std::uint64_t seed, bool control_variate) {
  if (m == 0) throw std::invalid_argument("g_functional: m must be >= 1");
  if (n < 2) throw std::invalid_argument("g_functional: need n >= 2");
  const std::size_t k = nodes.size();
  std::vector<double> mix(2 * k), comp(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto [rho, dc] = nodes[i];
    if (!(std::fabs(rho) <= 1.0) || !(std::fabs(dc) <= 1.0))
      throw std::invalid_argument("g_functional: |rho| and |D| must be <= 1");
    mix[2 * i] = rho;
    comp[2 * i] = std::sqrt(std::max(0.0, (1.0 - rho) * (1.0 + rho)));
    mix[2 * i + 1] = dc;
    comp[2 * i + 1] = std::sqrt(std::max(0.0, (1.0 - dc) * (1.0 + dc)));
  }
  std::vector<double> sum(k, 0.0), sum2(k, 0.0);
  std::vector<double> x(m * m), y(m * m), z(m * m);
  const unsigned patterns = 1u << m;
  for (std::uint64_t s = 0; s < n; ++s) {
    gaussian_matrix_pair(m, seed, s, x, y);
    const double dx = std::fabs(determinant(x, m));
    const double dy = control_variate ? std::fabs(determinant(y, m)) : 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (unsigned p = 0; p < patterns; ++p) {
        for (unsigned r = 0; r < m; ++r) {
          const double a = mix[2 * i + (r == 0 ? 0 : 1)];
          const double b = comp[2 * i + (r == 0 ? 0 : 1)] * ((p >> r) & 1u ? -1.0 : 1.0);
          for (unsigned c = 0; c < m; ++c) z[r * m + c] = a * x[r * m + c] + b * y[r * m + c];
        }
        acc += std::fabs(determinant(z, m));
      }
      // Control variate: at rho = D = 0 every pattern gives |det y|, so v has mean G - G(0,0).
      const double v = dx * (acc / patterns - dy);
      sum[i] += v;
      sum2[i] += v * v;
    }
  }
  std::vector<Estimate> out(k);
  const double nd = static_cast<double>(n);
  const double g0 = control_variate ? g_at_origin(m) : 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double mean = sum[i] / nd;
    const double var = std::max(0.0, (sum2[i] - nd * mean * mean) / (nd - 1.0));
    out[i] = {g0 + mean, std::sqrt(var / nd)};
  }
  return out;
}

Estimate g_functional(double rho, double dcoef, unsigned m, std::uint64_t n, std::uint64_t seed,
                      bool control_variate) {
  const std::pair<double, double> node{rho, dcoef};
  return g_functional_grid({&node, 1}, m, n, seed, control_variate).front();
}

double g_exact_m1(double rho) {
  if (!(std::fabs(rho) <= 1.0)) throw std::invalid_argument("g_exact_m1: |rho| must be <= 1");
  return 2.0 / std::numbers::pi * (std::sqrt((1.0 - rho) * (1.0 + rho)) + rho * std::asin(rho));
}

double g_at_origin(unsigned m) {
  double p = 1.0;
  for (unsigned k = 1; k <= m; ++k) p *= m_kj(k, 1.0);
  return p * p;
}

}  // namespace kssvar
