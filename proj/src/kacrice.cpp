#include "kssvar/kacrice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kssvar/gaussian_matrix.hpp"
#include "kssvar/quadrature.hpp"
#include "kssvar/special.hpp"

namespace kssvar::kacrice {

namespace {

double poly(double x, std::initializer_list<double> c) {
  double s = 0.0;
  for (auto it = std::rbegin(c); it != std::rend(c); ++it) s = s * x + *it;
  return s;
}

// Taylor coefficients in u = psi^2 (u^1..u^6) of 1-c^2, 1-c^2-a^2 and b(1-c^2)-a^2 c.
struct Series {
  double oc[7]{}, n[7]{}, p[7]{};
  explicit Series(double d) {
    const double e = d * (d - 1.0);
    oc[1] = d;
    oc[2] = -d * (3 * d - 1) / 6;
    oc[3] = d * poly(d, {4, -15, 15}) / 90;
    oc[4] = -d * poly(d, {-34, 147, -210, 105}) / 2520;
    oc[5] = d * poly(d, {496, -2370, 4095, -3150, 945}) / 113400;
    oc[6] = -d * poly(d, {-11056, 56958, -111705, 107415, -51975, 10395}) / 7484400;
    n[2] = e / 2;
    n[3] = -e * (d - 1) / 3;
    n[4] = e * poly(d, {22, -35, 15}) / 120;
    n[5] = -e * poly(d, {-176, 357, -252, 63}) / 1890;
    n[6] = e * poly(d, {10256, -24410, 22365, -9450, 1575}) / 226800;
    p[2] = -e / 2;
    p[3] = e * (5 * d - 6) / 12;
    p[4] = -e * poly(d, {28, -40, 15}) / 80;
    p[5] = e * poly(d, {-6344, 12012, -7938, 1827}) / 30240;
    p[6] = -e * poly(d, {418176, -951040, 847980, -350280, 56385}) / 3628800;
  }
  static double eval(const double* c, double u) {
    double s = 0.0;
    for (int k = 6; k >= 1; --k) s = s * u + c[k];
    return s * u;
  }
};

// Kernel on [0, pi/2] with cos > 0, in log form.
ScaledKernel kernel_near(double z, unsigned d, bool series) {
  ScaledKernel k;
  k.z = z;
  k.d = d;
  const double dd = d;
  const double psi = z / std::sqrt(dd);
  if (z == 0.0) {
    k.a = 0.0;
    k.b = k.c = k.dd = 1.0;
    k.sigma_sq = 0.0;
    k.rho = -1.0;
    k.one_minus_c2 = k.numerator = 0.0;
    return k;
  }
  const double sh = std::sin(0.5 * psi);
  const double s = std::sin(psi);
  const double co = std::cos(psi);
  double lc = 0.0;
  if (co > 0.0) {
    lc = psi < 1.0 ? std::log1p(-2.0 * sh * sh) : std::log(co);  // log cos psi
    k.c = std::exp(dd * lc);
    k.dd = std::exp((dd - 1.0) * lc);
    k.b = k.c - (dd - 1.0) * std::exp((dd - 2.0) * lc) * s * s;
  } else {
    // psi rounded onto or just past pi/2
    k.c = std::pow(co, dd);
    k.dd = std::pow(co, dd - 1.0);
    k.b = k.c - (dd - 1.0) * std::pow(co, dd - 2.0) * s * s;
  }
  k.a = -std::sqrt(dd) * k.dd * s;
  if (series) {
    const Series ser(dd);
    const double u = psi * psi;
    k.one_minus_c2 = Series::eval(ser.oc, u);
    k.numerator = Series::eval(ser.n, u);
    const double p = Series::eval(ser.p, u);
    k.sigma_sq = k.numerator / k.one_minus_c2;
    k.rho = p / k.numerator;
  } else {
    k.one_minus_c2 = co > 0.0 ? -std::expm1(2.0 * dd * lc) : 1.0 - k.c * k.c;
    k.numerator = k.one_minus_c2 - k.a * k.a;
    k.sigma_sq = k.numerator / k.one_minus_c2;
    k.rho = (k.b * k.one_minus_c2 - k.a * k.a * k.c) / k.numerator;
  }
  k.sigma_sq = std::clamp(k.sigma_sq, 0.0, 1.0);
  k.rho = std::clamp(k.rho, -1.0, 1.0);
  return k;
}

double z0_for(unsigned d) { return 0.05 * std::min(1.0, std::sqrt(static_cast<double>(d))); }

}  // namespace

ScaledKernel scaled_kernel(double z, unsigned d) {
  if (d < 1) throw std::invalid_argument("scaled_kernel: d must be >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  const double zmax = sd * std::numbers::pi;
  if (!(z >= 0.0 && z <= zmax * (1.0 + 1e-15)))
    throw std::invalid_argument("scaled_kernel: z = " + std::to_string(z) + " outside [0, sqrt(d) pi]");
  const double z0 = z0_for(d);
  if (z <= 0.5 * zmax) return kernel_near(z, d, z < z0);

  const double zm = std::max(0.0, zmax - z);
  if (zm < z0) {
    // Mirror of the series zone: psi -> pi - psi flips signs by parity of d.
    ScaledKernel k = kernel_near(zm, d, true);
    const double even = d % 2 == 0 ? 1.0 : -1.0;
    k.z = z;
    k.a *= -even;
    k.b *= even;
    k.c *= even;
    k.dd *= -even;
    k.rho *= even;
    return k;
  }
  ScaledKernel k;
  k.z = z;
  k.d = d;
  const double dd = d;
  const double psi = z / sd;
  const double co = std::cos(psi), s = std::sin(psi);
  k.c = std::pow(co, dd);
  k.dd = std::pow(co, dd - 1.0);
  k.a = -sd * k.dd * s;
  k.b = k.c - (dd - 1.0) * std::pow(co, dd - 2.0) * s * s;
  k.one_minus_c2 = 1.0 - k.c * k.c;
  k.numerator = k.one_minus_c2 - k.a * k.a;
  k.sigma_sq = std::clamp(k.numerator / k.one_minus_c2, 0.0, 1.0);
  k.rho = std::clamp((k.b * k.one_minus_c2 - k.a * k.a * k.c) / k.numerator, -1.0, 1.0);
  return k;
}

Matrix ConditionalCovariance::full() const {
  Matrix f(2 * m, 2 * m);
  for (unsigned i = 0; i < m; ++i) {
    f(i, i) = f(m + i, m + i) = b11[i];
    f(i, m + i) = f(m + i, i) = b12[i];
  }
  return f;
}

bool ConditionalCovariance::is_psd(double tol) const {
  // Block structure: eigenvalues are b11[i] +- b12[i].
  for (unsigned i = 0; i < m; ++i)
    if (b11[i] - std::fabs(b12[i]) < -tol) return false;
  return true;
}

ConditionalCovariance conditional_covariance(const ScaledKernel& k, unsigned m) {
  if (m == 0) throw std::invalid_argument("conditional_covariance: m must be >= 1");
  ConditionalCovariance cc;
  cc.m = m;
  cc.b11.assign(m, 1.0);
  cc.b12.assign(m, k.dd);
  cc.b11[0] = k.sigma_sq;
  cc.b12[0] = k.sigma_sq * k.rho;
  return cc;
}

Matrix joint_covariance(const ScaledKernel& k, unsigned m) {
  if (m == 0) throw std::invalid_argument("joint_covariance: m must be >= 1");
  const std::size_t n = 2 * m + 2;
  Matrix s = Matrix::identity(n);
  const std::size_t ys = 0, yt = 1, ds = 2, dt = 2 + m;
  s(ys, yt) = s(yt, ys) = k.c;
  s(ys, dt) = s(dt, ys) = k.a;   // E[Y(s) Y'_1(t)]
  s(yt, ds) = s(ds, yt) = -k.a;  // E[Y'_1(s) Y(t)]
  s(ds, dt) = s(dt, ds) = k.b;
  for (unsigned i = 1; i < m; ++i) s(ds + i, dt + i) = s(dt + i, ds + i) = k.dd;
  return s;
}

namespace {

double weight(double z, unsigned d, unsigned m) {
  if (m == 1) return 1.0;
  const double sd = std::sqrt(static_cast<double>(d));
  return std::pow(sd * std::sin(z / sd), m - 1.0);
}

double ratio(const ScaledKernel& k, unsigned m) {
  // sigma^2 / (1-c^2)^{m/2} = numerator / (1-c^2)^{1+m/2}
  if (k.one_minus_c2 == 0.0) return 0.0;
  return k.numerator / std::pow(k.one_minus_c2, 1.0 + 0.5 * m);
}

}  // namespace

double moment_integrand(double z, unsigned d, unsigned m, const GFunction& g) {
  const ScaledKernel k = scaled_kernel(z, d);
  const double w = weight(z, d, m);
  if (k.one_minus_c2 == 0.0) return 0.0;  // z = 0: the product vanishes in the limit
  return w * ratio(k, m) * g(k);
}

double variance_integrand(double z, unsigned d, unsigned m, const GFunction& g) {
  const ScaledKernel k = scaled_kernel(z, d);
  const double w = weight(z, d, m);
  const double g0 = g_at_origin(m);
  if (k.one_minus_c2 == 0.0) return -w * g0;
  return w * (ratio(k, m) * g(k) - g0);
}

VarianceResult variance_finite_d(unsigned d, unsigned m, const QuadratureSpec& spec, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("variance_finite_d: d must be >= 2");
  if (m == 0) throw std::invalid_argument("variance_finite_d: m must be >= 1");
  VarianceResult res;
  const double sd = std::sqrt(static_cast<double>(d));
  const double zmax = 0.5 * sd * std::numbers::pi;

  GFunction g;
  quad::CubicSpline g_spline, se_spline;
  if (m == 1) {
    g = [](const ScaledKernel& k) { return g_exact_m1(k.rho); };
  } else {
    // Geometric z-grid plus z = 0, where (rho, D) = (-1, 1).
    const unsigned nn = std::max(8u, spec.g_nodes);
    const double zlo = 1e-3, zhi = std::min(zmax, 40.0);
    std::vector<double> zs{0.0};
    for (unsigned i = 0; i < nn; ++i) zs.push_back(zlo * std::pow(zhi / zlo, static_cast<double>(i) / (nn - 1)));
    std::vector<std::pair<double, double>> nodes;
    for (double z : zs) {
      const ScaledKernel k = scaled_kernel(z, d);
      nodes.emplace_back(k.rho, k.dd);
    }
    const auto est = g_functional_grid(nodes, m, spec.g_samples, seed);
    std::vector<double> gv, sv;
    for (const auto& e : est) {
      gv.push_back(e.value);
      sv.push_back(e.error);
      res.g_se_max = std::max(res.g_se_max, e.error);
    }
    g_spline = quad::CubicSpline(zs, gv);
    se_spline = quad::CubicSpline(zs, sv);
    const double g0 = g_at_origin(m);
    g = [&, zhi, g0](const ScaledKernel& k) { return k.z <= zhi ? g_spline(k.z) : g0; };
  }

  const double pref = kappa(m) * kappa(m - 1) / (2.0 * std::pow(2.0 * std::numbers::pi, m));
  auto fv = [&](double z) { return variance_integrand(z, d, m, g); };
  const auto q = quad::adaptive(fv, 0.0, zmax, spec.abs_tol, spec.rel_tol, spec.max_intervals);
  auto fm = [&](double z) { return moment_integrand(z, d, m, g); };
  const double moment = quad::on_partition(fm, q.partition);

  res.value = 1.0 + pref * q.value;
  res.second_factorial_moment = 2.0 + 4.0 * pref * moment;
  res.quadrature_error = pref * q.error;
  res.converged = q.converged;
  res.evaluations = q.evaluations;
  if (m > 1) {
    auto fe = [&](double z) {
      if (z > se_spline.back()) return 0.0;
      const ScaledKernel k = scaled_kernel(z, d);
      return weight(z, d, m) * ratio(k, m) * std::fabs(se_spline(z));
    };
    res.mc_error = pref * quad::on_partition(fe, q.partition);
  }
  if (!res.converged)
    throw std::runtime_error("variance_finite_d: quadrature error " + std::to_string(res.quadrature_error) +
                             " exceeds tolerance");
  return res;
}

double second_factorial_moment(unsigned d, unsigned m, const QuadratureSpec& spec, std::uint64_t seed) {
  return variance_finite_d(d, m, spec, seed).second_factorial_moment;
}

}  // namespace kssvar::kacrice
