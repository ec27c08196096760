#pragma once

#include <cstddef>
#include <vector>

namespace kssvar {

enum class Form { affine, homogeneous };

/// Exponent vector of a monomial. Affine indices have m entries with sum <= d;
/// homogeneous indices have m+1 entries (leading entry is the power of t0) with sum == d.
class MultiIndex {
 public:
  MultiIndex(std::vector<unsigned> exponents, unsigned degree_bound, Form form);

  [[nodiscard]] const std::vector<unsigned>& exponents() const noexcept { return exponents_; }
  [[nodiscard]] unsigned degree_bound() const noexcept { return degree_bound_; }
  [[nodiscard]] Form form() const noexcept { return form_; }
  [[nodiscard]] unsigned total_degree() const noexcept;

  /// d! / (j1! ... jm! (d-|j|)!), which is also the KSS coefficient variance.
  [[nodiscard]] double multinomial_weight() const;

  /// The homogeneous counterpart (d-|j|, j1, ..., jm) of an affine index.
  [[nodiscard]] MultiIndex homogenized() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> exponents_;
  unsigned degree_bound_;
  Form form_;
};

/// Affine exponent vectors with |j| <= d in graded-lexicographic order:
/// ascending total degree, then lexicographically descending within a degree.
/// For m = 1 this is 0, 1, ..., d.
std::vector<std::vector<unsigned>> graded_lex_indices(unsigned m, unsigned d);

/// binomial(d + m, m): number of monomials of degree <= d in m variables.
std::size_t monomial_count(unsigned m, unsigned d);

/// Multinomial weight for an affine exponent vector (no validation).
double multinomial_weight(const std::vector<unsigned>& affine_exponents, unsigned d);

}  // namespace kssvar
