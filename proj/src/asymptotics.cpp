#include "kssvar/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "kssvar/gaussian_matrix.hpp"
#include "kssvar/quadrature.hpp"

namespace kssvar::asymptotics {

namespace {

constexpr double kSeriesCut = 0.05;

// 1 + rho_bar as a series in x = t^2.
double one_plus_rho_series(double x) {
  return x * (1.0 / 6 + x * (-1.0 / 72 + x * (7.0 / 2160 + x * (-23.0 / 51840 + x * (13.0 / 2177280 + x * (-11.0 / 130636800))))));
}

// 1 - e^{-t^2}
double one_minus_e(double t) { return -std::expm1(-t * t); }

}  // namespace

double sigma_bar_sq(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("sigma_bar_sq: t must be >= 0");
  const double x = t * t;
  if (t < kSeriesCut) {
    const double x2 = x * x;
    return x / 2 - x2 / 12 + x2 * x2 / 720 - x2 * x2 * x2 / 30240 + x2 * x2 * x2 * x2 / 1209600;
  }
  return 1.0 - x / std::expm1(x);
}

double rho_bar(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("rho_bar: t must be >= 0");
  const double x = t * t;
  if (t < kSeriesCut) return -1.0 + one_plus_rho_series(x);
  const double e = std::exp(-x);
  const double num = (-x - std::expm1(-x)) * std::exp(-0.5 * x);
  const double den = -std::expm1(-x) - x * e;
  return std::clamp(num / den, -1.0, 1.0);
}

namespace {

double mixing_constant(unsigned k, unsigned m, double t) {
  if (k < m) return std::exp(-0.5 * t * t) / std::sqrt(one_minus_e(t));
  const double r = rho_bar(t);
  const double s2 = t < kSeriesCut ? one_plus_rho_series(t * t) * (1.0 - r) : (1.0 - r) * (1.0 + r);
  return r / std::sqrt(s2);
}

// E ||xi|| ||rho xi + sqrt(1-rho^2) eta|| at rho_bar, keeping 1 + rho accurate near t = 0.
double mu_tilde_rho(unsigned k, double t) {
  const double r = rho_bar(t);
  const double s2 = t < kSeriesCut ? one_plus_rho_series(t * t) * (1.0 - r) : (1.0 - r) * (1.0 + r);
  if (s2 <= 0.0) return static_cast<double>(k);
  const double s = std::sqrt(s2);
  return s * mixed_norm_mean(k, r / s, 1e-13).value;
}

double mu_tilde_d(unsigned k, double t) {
  const double s2 = one_minus_e(t);
  if (s2 <= 0.0) return static_cast<double>(k);
  const double s = std::sqrt(s2);
  return s * mixed_norm_mean(k, std::exp(-0.5 * t * t) / s, 1e-13).value;
}

}  // namespace

Estimate big_m_k(unsigned k, double t, unsigned m, Method method, std::uint64_t budget, std::uint64_t seed) {
  if (k == 0 || k > m) throw std::invalid_argument("big_m_k: need 1 <= k <= m");
  if (!(t > 0.0)) throw std::invalid_argument("big_m_k: t must be > 0");
  const double c = mixing_constant(k, m, t);
  if (method == Method::quadrature) return mixed_norm_mean(k, c, 1e-12);
  return mixed_norm_mean_mc(k, c, budget, seed);
}

LimitIngredients ingredients(unsigned m, double t) {
  LimitIngredients li;
  li.t = t;
  li.sigma_bar_sq = sigma_bar_sq(t);
  li.rho_bar = rho_bar(t);
  for (unsigned k = 1; k <= m; ++k) {
    li.m_k1.push_back(m_kj(k, 1.0));
    li.big_m.push_back(big_m_k(k, t, m));
  }
  return li;
}

VInfResult v_infinity(unsigned m, const VInfSpec& spec, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("v_infinity: m must be >= 1");
  VInfResult res;
  res.route = spec.route;
  const double g0 = g_at_origin(m);
  const double pref = kappa(m) * kappa(m - 1) / (2.0 * std::pow(2.0 * std::numbers::pi, m));

  // sigma_bar^2 (1 - e^{-t^2})^{-m/2} t^{m-1}
  auto outer = [m](double t) {
    return sigma_bar_sq(t) * std::pow(t * t / one_minus_e(t), 0.5 * m) / t;
  };

  std::function<double(double)> g;
  quad::CubicSpline g_spline, se_spline;
  if (m == 1) {
    g = [](double t) { return g_exact_m1(rho_bar(t)); };
  } else if (spec.route == Route::product) {
    g = [m](double t) {
      double p = mu_tilde_rho(m, t);
      for (unsigned k = 1; k < m; ++k) p *= mu_tilde_d(k, t);
      return p;
    };
  } else {
    const unsigned nn = std::max(8u, spec.g_nodes);
    const double tlo = 1e-3, thi = spec.t_max;
    std::vector<double> ts{0.0};
    for (unsigned i = 0; i < nn; ++i) ts.push_back(tlo * std::pow(thi / tlo, static_cast<double>(i) / (nn - 1)));
    std::vector<std::pair<double, double>> nodes;
    for (double t : ts) nodes.emplace_back(t == 0.0 ? -1.0 : rho_bar(t), std::exp(-0.5 * t * t));
    const auto est = g_functional_grid(nodes, m, spec.g_samples, seed);
    std::vector<double> gv, sv;
    for (const auto& e : est) {
      gv.push_back(e.value);
      sv.push_back(e.error);
    }
    g_spline = quad::CubicSpline(ts, gv);
    se_spline = quad::CubicSpline(ts, sv);
    g = [&](double t) { return g_spline(t); };
    res.nodes = static_cast<unsigned>(ts.size());
  }

  auto f = [&](double t) {
    if (t == 0.0) return 0.0;
    return outer(t) * g(t) - g0 * std::pow(t, m - 1.0);
  };
  const auto q = quad::adaptive(f, 0.0, spec.t_max, spec.abs_tol, spec.rel_tol);
  if (!q.converged)
    throw std::runtime_error("v_infinity: quadrature error " + std::to_string(q.error) + " exceeds tolerance");
  res.value = 1.0 + pref * q.value;
  res.quadrature_error = pref * q.error;
  if (m > 1 && spec.route == Route::direct) {
    auto fe = [&](double t) { return t == 0.0 ? 0.0 : outer(t) * std::fabs(se_spline(t)); };
    res.mc_error = pref * quad::on_partition(fe, q.partition);
  }
  if (res.nodes == 0) res.nodes = static_cast<unsigned>(q.evaluations);
  return res;
}

}  // namespace kssvar::asymptotics
