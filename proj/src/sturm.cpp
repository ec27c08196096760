#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kssvar/rootcount.hpp"

namespace kssvar::rootcount {

namespace {

using Poly = std::vector<mpz_class>;  // ascending coefficients, no trailing zeros

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int sgn(const mpz_class& x) { return mpz_sgn(x.get_mpz_t()); }

// Exact integer images c_i = a_i * 2^s with a common shift s.
Poly to_integers(std::span<const double> a) {
  int min_exp = 0;
  bool first = true;
  for (double x : a) {
    if (x == 0.0) continue;
    if (!std::isfinite(x)) throw std::invalid_argument("count_univariate: non-finite coefficient");
    int e = 0;
    std::frexp(x, &e);
    if (first || e - 53 < min_exp) min_exp = e - 53;
    first = false;
  }
  Poly p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    int e = 0;
    const double f = std::frexp(a[i], &e);
    mpz_class mant(std::ldexp(f, 53));
    mpz_mul_2exp(p[i].get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(e - 53 - min_exp));
  }
  trim(p);
  return p;
}

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) a mod b.
Poly prem(Poly r, const Poly& b) {
  const std::size_t k = b.size() - 1;
  const mpz_class& lc = b.back();
  std::size_t n = r.size() - 1;
  const std::size_t steps = n - k + 1;
  mpz_class coef;
  for (std::size_t s = 0; s < steps; ++s, --n) {
    coef = r[n];
    for (std::size_t j = 0; j < n; ++j) r[j] *= lc;
    if (coef != 0)
      for (std::size_t j = 0; j < k; ++j) r[n - k + j] -= coef * b[j];
    r[n] = 0;
  }
  trim(r);
  return r;
}

Poly derivative(const Poly& p) {
  Poly q(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) q[i - 1] = p[i] * static_cast<unsigned long>(i);
  return q;
}

std::size_t max_bits(const Poly& p) {
  std::size_t b = 0;
  for (const auto& c : p) b = std::max(b, mpz_sizeinbase(c.get_mpz_t(), 2));
  return b;
}

mpz_class ipow(const mpz_class& x, std::size_t e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
  return r;
}

}  // namespace

RootCountResult count_univariate(std::span<const double> coeffs, std::size_t bit_budget) {
  if (coeffs.empty()) throw std::invalid_argument("count_univariate: zero polynomial");
  if (coeffs.back() == 0.0) {
    bool all_zero = true;
    for (double c : coeffs) all_zero = all_zero && c == 0.0;
    throw std::invalid_argument(all_zero ? "count_univariate: zero polynomial"
                                         : "count_univariate: zero leading coefficient");
  }
  RootCountResult res;
  res.method = Method::sturm;
  res.bezout_cap = coeffs.size() - 1;
  res.certified = true;

  Poly r0 = to_integers(coeffs);
  if (r0.size() <= 1) return res;
  Poly r1 = derivative(r0);

  // Sturm chain s_i = eps_i * lambda_i * r_i with lambda_i > 0, where r_i is the
  // subresultant PRS. Only leading signs and degrees matter.
  std::vector<std::pair<int, std::size_t>> chain;  // (sign of lc(s_i), deg s_i)
  chain.emplace_back(sgn(r0.back()), r0.size() - 1);
  chain.emplace_back(sgn(r1.back()), r1.size() - 1);

  int eps_prev = 1, eps_cur = 1;
  std::size_t delta = r0.size() - r1.size();
  mpz_class beta = (delta + 1) % 2 == 0 ? 1 : -1;
  mpz_class psi = -1;
  while (r1.size() > 1) {
    Poly r2 = prem(r0, r1);
    if (r2.empty()) break;  // not square-free; the chain still counts distinct roots
    for (auto& c : r2) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), beta.get_mpz_t());
    if (max_bits(r2) > bit_budget) {
      res.certified = false;
      res.unresolved_regions = 1;
      return res;
    }
    const mpz_class& g = r1.back();
    const int lc_sign_pow = ((delta + 1) % 2 == 1) ? sgn(g) : 1;
    const int eps_next = -eps_prev * sgn(beta) * lc_sign_pow;
    chain.emplace_back(eps_next * sgn(r2.back()), r2.size() - 1);

    const std::size_t delta_next = r1.size() - r2.size();
    // psi_{i+1} = (-g)^delta / psi^(delta-1)
    mpz_class num = ipow(-g, delta);
    if (delta >= 1) {
      mpz_class den = ipow(psi, delta - 1);
      mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    } else {
      num *= psi;
    }
    psi = num;
    beta = -g * ipow(psi, delta_next);

    eps_prev = eps_cur;
    eps_cur = eps_next;
    delta = delta_next;
    r0 = std::move(r1);
    r1 = std::move(r2);
  }

  auto variations = [&](bool at_minus_inf) {
    int changes = 0, last = 0;
    for (const auto& [s, deg] : chain) {
      const int v = (at_minus_inf && deg % 2 == 1) ? -s : s;
      if (v == 0) continue;
      if (last != 0 && v != last) ++changes;
      last = v;
    }
    return changes;
  };
  res.count = static_cast<unsigned>(variations(true) - variations(false));
  return res;
}

}  // namespace kssvar::rootcount
