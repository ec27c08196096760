#include "kssvar/multi_index.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kssvar {

namespace {

double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<unsigned> exponents, unsigned degree_bound, Form form)
    : exponents_(std::move(exponents)), degree_bound_(degree_bound), form_(form) {
  if (exponents_.empty()) throw std::invalid_argument("MultiIndex: empty exponent vector");
  const unsigned total = total_degree();
  if (form_ == Form::affine && total > degree_bound_)
    throw std::invalid_argument("MultiIndex: affine degree " + std::to_string(total) + " exceeds bound " +
                                std::to_string(degree_bound_));
  if (form_ == Form::homogeneous && total != degree_bound_)
    throw std::invalid_argument("MultiIndex: homogeneous degree " + std::to_string(total) + " != " +
                                std::to_string(degree_bound_));
}

unsigned MultiIndex::total_degree() const noexcept {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0u);
}

double MultiIndex::multinomial_weight() const {
  if (form_ == Form::affine) return kssvar::multinomial_weight(exponents_, degree_bound_);
  return kssvar::multinomial_weight({exponents_.begin() + 1, exponents_.end()}, degree_bound_);
}

MultiIndex MultiIndex::homogenized() const {
  if (form_ == Form::homogeneous) return *this;
  std::vector<unsigned> h;
  h.reserve(exponents_.size() + 1);
  h.push_back(degree_bound_ - total_degree());
  h.insert(h.end(), exponents_.begin(), exponents_.end());
  return {std::move(h), degree_bound_, Form::homogeneous};
}

double multinomial_weight(const std::vector<unsigned>& affine_exponents, unsigned d) {
  double w = 1.0;
  unsigned remaining = d;
  for (unsigned j : affine_exponents) {
    w *= binomial(remaining, j);
    remaining -= j;
  }
  return w;
}

std::size_t monomial_count(unsigned m, unsigned d) {
  return static_cast<std::size_t>(binomial(d + m, m) + 0.5);
}

std::vector<std::vector<unsigned>> graded_lex_indices(unsigned m, unsigned d) {
  std::vector<std::vector<unsigned>> out;
  out.reserve(monomial_count(m, d));
  std::vector<unsigned> current(m, 0);
  // Lexicographically descending compositions of `total` into m parts.
  std::function<void(unsigned, unsigned)> fill = [&](unsigned pos, unsigned left) {
    if (pos + 1 == m) {
      current[pos] = left;
      out.push_back(current);
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      current[pos] = v;
      fill(pos + 1, left - v);
    }
  };
  for (unsigned total = 0; total <= d; ++total) fill(0, total);
  return out;
}

}  // namespace kssvar
