#pragma once

#include <cstdint>
#include <functional>

#include "kssvar/linalg.hpp"

namespace kssvar::kacrice {

/// Kernel functions at angle psi = z / sqrt(d):
///   a = -sqrt(d) cos^{d-1} sin,  b = cos^d - (d-1) cos^{d-2} sin^2,  c = cos^d,  dd = cos^{d-1},
///   sigma_sq = 1 - a^2/(1-c^2),  rho = (b(1-c^2) - a^2 c)/(1-c^2-a^2).
/// one_minus_c2 and numerator (= 1-c^2-a^2) are kept because the integrand needs their ratio.
struct ScaledKernel {
  double z = 0.0;
  unsigned d = 0;
  double a = 0.0, b = 1.0, c = 1.0, dd = 1.0;
  double sigma_sq = 0.0;
  double rho = -1.0;
  double one_minus_c2 = 0.0;
  double numerator = 0.0;
};

/// Valid for 0 <= z <= sqrt(d) pi. Below z0 = 0.05 min(1, sqrt(d)) (and symmetrically near
/// the antipode) sigma_sq and rho come from order-6 Taylor series in psi^2.
ScaledKernel scaled_kernel(double z, unsigned d);

/// Conditional covariance of (Y'_l(s), Y'_l(t)) / sqrt(d) given Y(s) = Y(t) = 0:
/// b11 = diag(sigma^2, 1, ..., 1), b12 = diag(sigma^2 rho, D, ..., D).
struct ConditionalCovariance {
  unsigned m = 0;
  std::vector<double> b11, b12;  // diagonals
  [[nodiscard]] Matrix full() const;  // 2m x 2m [[b11, b12], [b12, b11]]
  [[nodiscard]] bool is_psd(double tol = 1e-12) const;
};
ConditionalCovariance conditional_covariance(const ScaledKernel& k, unsigned m);

/// Unconditional covariance of (Y_l(s), Y_l(t), Y'_l(s)/sqrt(d), Y'_l(t)/sqrt(d)) for one
/// equation in the canonical pair frames, a (2m+2) x (2m+2) matrix.
Matrix joint_covariance(const ScaledKernel& k, unsigned m);

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  std::size_t max_intervals = 4000;
  unsigned g_nodes = 200;                // z-grid for Monte Carlo G (m >= 2)
  std::uint64_t g_samples = 2'000'000;   // draws per node, shared across nodes
};

struct VarianceResult {
  double value = 0.0;                   // d^{-m/2} Var(N)
  double second_factorial_moment = 0.0; // d^{-m/2} E[N^Y (N^Y - 1)]
  double quadrature_error = 0.0;
  double mc_error = 0.0;                // propagated G standard errors (0 for m = 1)
  double g_se_max = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

/// G(rho, D) provider used by the integrand.
using GFunction = std::function<double(const ScaledKernel&)>;

/// Integrand of the scaled variance at z in [0, sqrt(d) pi]:
///   d^{(m-1)/2} sin^{m-1}(z/sqrt d) [sigma^2 G(rho, D) / (1-c^2)^{m/2} - G(0,0)].
double variance_integrand(double z, unsigned d, unsigned m, const GFunction& g);

/// Same without the G(0,0) subtraction (second factorial moment density).
double moment_integrand(double z, unsigned d, unsigned m, const GFunction& g);

/// d^{-m/2} Var(N_d) via the two-point Rice formula. For m = 1, G is exact; for m >= 2 it is
/// estimated on a geometric z-grid with common random numbers and spline-interpolated.
/// The second factorial moment is evaluated on the same quadrature nodes, so
/// value == (second_factorial_moment - 4 d^{m/2}) / 4 + 1/2 up to rounding.
VarianceResult variance_finite_d(unsigned d, unsigned m, const QuadratureSpec& spec = {}, std::uint64_t seed = 1);

double second_factorial_moment(unsigned d, unsigned m, const QuadratureSpec& spec = {}, std::uint64_t seed = 1);

}  // namespace kssvar::kacrice
