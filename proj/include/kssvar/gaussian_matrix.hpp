#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kssvar/special.hpp"

namespace kssvar {

/// Fills x (m*m, row-major) and y with independent standard normals for sample `index`.
void gaussian_matrix_pair(unsigned m, std::uint64_t seed, std::uint64_t index, std::span<double> x,
                          std::span<double> y);

/// G(rho, D) = E |det X| |det Z| with Z's first row rho X_1 + sqrt(1-rho^2) Y_1 and every
/// other row D X_k + sqrt(1-D^2) Y_k. Each draw is averaged over all 2^m sign patterns of the
/// rows of Y, so the estimate is exactly even in rho and in D. The same draws estimate
/// G - G(0, 0), to which the exact G(0, 0) is added; the error vanishes as rho, D -> 0.
/// Without the control variate the plain average of |det X| |det Z| is returned.
Estimate g_functional(double rho, double dcoef, unsigned m, std::uint64_t n, std::uint64_t seed,
                      bool control_variate = true);

/// The same estimator at many (rho, D) nodes sharing one set of draws (common random numbers).
std::vector<Estimate> g_functional_grid(std::span<const std::pair<double, double>> nodes, unsigned m,
                                        std::uint64_t n, std::uint64_t seed, bool control_variate = true);

/// m = 1 closed form: (2/pi)(sqrt(1-rho^2) + rho arcsin rho). D plays no role.
double g_exact_m1(double rho);

/// G(0, 0) = (prod_{k=1}^m m_{k,1})^2.
double g_at_origin(unsigned m);

}  // namespace kssvar
