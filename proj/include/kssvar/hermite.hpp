#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kssvar/kacrice.hpp"
#include "kssvar/special.hpp"

namespace kssvar::hermite {

/// Probabilists' Hermite polynomial by H_{n+1} = x H_n - n H_{n-1}.
double hermite_eval(unsigned n, double x);

/// Coefficient of the Dirac delta at 0 in the product Hermite basis:
/// prod_j (1/sqrt(2 pi)) (-1/2)^{a_j/2} / (a_j/2)!, and 0 if any a_j is odd.
double b_coefficient(std::span<const unsigned> alpha);

/// Hermite coefficients of the box kernel (2 eps)^{-m} 1{|x|_inf < eps}, computed by
/// Gauss-Legendre integration of H_alpha phi over the box. Tends to b_coefficient as eps -> 0.
double b_epsilon(std::span<const unsigned> alpha, double eps);

/// Shared sample of m x m standard Gaussian matrices for the chaos coefficients of |det|.
/// Every draw is expanded into its orbit under cyclic row shifts, cyclic column shifts and
/// sign flips of single rows, so coefficient symmetries in those groups hold exactly.
class DetSample {
 public:
  DetSample(unsigned m, std::uint64_t n, std::uint64_t seed);
  [[nodiscard]] unsigned m() const noexcept { return m_; }
  [[nodiscard]] std::uint64_t size() const noexcept { return n_; }

  /// f_beta = (1/beta!) E[|det y| prod H_{beta_i}(y_i)], beta indexed row-major over m^2 entries.
  [[nodiscard]] Estimate f_coefficient(std::span<const unsigned> beta) const;

  /// E|det y| and E|det y| ||y||_F^2.
  [[nodiscard]] Estimate mean_abs_det() const;

 private:
  unsigned m_;
  std::uint64_t n_;
  std::uint64_t seed_;
  unsigned orbit_;
  template <class F>
  Estimate average(F&& per_matrix) const;
};

Estimate f_coefficient(std::span<const unsigned> beta, unsigned m, std::uint64_t n, std::uint64_t seed);

/// Averaged second-order coefficient over the m^2 positions.
///   display:     (1/m^2)(E|det y| ||y||_F^2 - m^2 E|det y|)
///   coefficient: the same with the 1/beta! = 1/2 factor, i.e. display / 2.
struct FTilde {
  Estimate display;
  Estimate coefficient;
};
FTilde f_tilde_22(unsigned m, std::uint64_t n, std::uint64_t seed);

/// Second-chaos variance lower bound
///   (b_0^m f)^2 kappa_m kappa_{m-1} int_0^{sqrt(d) pi/2} d^{(m-1)/2} sin^{m-1}(z/sqrt d) R(z)^2 dz
/// where R is the covariance of the second standardized derivative coordinate (D for m >= 2, B for m = 1).
struct I2dResult {
  Estimate value;          // with f = coefficient normalization
  Estimate value_display;  // with f = display normalization
  double integral = 0.0;
  double quadrature_error = 0.0;
};
I2dResult i2d_lower_bound(unsigned d, unsigned m, const kacrice::QuadratureSpec& spec = {},
                          std::uint64_t n_mc = 200'000, std::uint64_t seed = 1);

/// E[H_2(xi) H_2(eta)] for standard normals with correlation rho (expected 2 rho^2).
Estimate mehler_check(double rho, std::uint64_t n, std::uint64_t seed);

/// All multi-indices over `entries` positions with total order <= max_order.
std::vector<std::vector<unsigned>> multi_indices(unsigned entries, unsigned max_order);

}  // namespace kssvar::hermite
