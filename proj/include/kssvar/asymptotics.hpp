#pragma once

#include <cstdint>
#include <vector>

#include "kssvar/special.hpp"

namespace kssvar::asymptotics {

/// 1 - t^2 e^{-t^2} / (1 - e^{-t^2}); series below t = 0.05.
double sigma_bar_sq(double t);

/// (1 - t^2 - e^{-t^2}) e^{-t^2/2} / (1 - (1 + t^2) e^{-t^2}); series below t = 0.05.
double rho_bar(double t);

using kssvar::m_kj;

enum class Method { quadrature, mc };

/// M_k(t) = E ||xi_k|| ||eta_k + c xi_k|| with c = e^{-t^2/2}/sqrt(1 - e^{-t^2}) for k < m and
/// c = rho_bar/sqrt(1 - rho_bar^2) for k = m.
Estimate big_m_k(unsigned k, double t, unsigned m, Method method = Method::quadrature,
                 std::uint64_t budget = 1'000'000, std::uint64_t seed = 1);

struct LimitIngredients {
  double t = 0.0;
  double sigma_bar_sq = 0.0;
  double rho_bar = 0.0;
  std::vector<double> m_k1;
  std::vector<Estimate> big_m;
};
LimitIngredients ingredients(unsigned m, double t);

enum class Route {
  product,  // G(rho, D) replaced by the product of one-dimensional mixed norm means (approximate for m >= 2)
  direct    // G(rho, D) estimated by Monte Carlo on a t-grid (common random numbers)
};

struct VInfSpec {
  Route route = Route::direct;
  double abs_tol = 1e-11;
  double rel_tol = 1e-12;
  double t_max = 12.0;
  unsigned g_nodes = 120;
  std::uint64_t g_samples = 400'000;
};

struct VInfResult {
  double value = 0.0;
  double quadrature_error = 0.0;
  double mc_error = 0.0;
  unsigned nodes = 0;
  Route route = Route::direct;
};

/// Limit of d^{-m/2} Var(N_d):
///   1 + kappa_m kappa_{m-1} / (2 (2 pi)^m) * int_0^inf t^{m-1} [sigma_bar^2 (1-e^{-t^2})^{-m/2} G(rho_bar, e^{-t^2/2}) - G(0,0)] dt.
/// For m = 1 both routes use the exact G and coincide.
VInfResult v_infinity(unsigned m, const VInfSpec& spec = {}, std::uint64_t seed = 1);

}  // namespace kssvar::asymptotics
