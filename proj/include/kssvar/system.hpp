#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kssvar/linalg.hpp"
#include "kssvar/multi_index.hpp"

namespace kssvar {

/// A unit vector in R^{m+1}. Construction rejects vectors whose norm is off by more than 1e-12.
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<double> coords);

  /// Normalizes an arbitrary nonzero vector.
  static SpherePoint normalized(std::vector<double> v);

  [[nodiscard]] const std::vector<double>& coords() const noexcept { return coords_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }

 private:
  std::vector<double> coords_;
};

/// A square system of m polynomials in m variables with common degree d.
///
/// Coefficients are stored densely, equation-major, each equation in the graded-lex
/// order of `graded_lex_indices(m, d)`. The homogeneous form reuses the same order:
/// the coefficient at affine index j multiplies t0^(d-|j|) t^j.
class KssSystem {
 public:
  KssSystem(unsigned m, unsigned d, Form form, std::uint64_t seed, std::vector<double> coefficients);

  [[nodiscard]] unsigned m() const noexcept { return m_; }
  [[nodiscard]] unsigned d() const noexcept { return d_; }
  [[nodiscard]] Form form() const noexcept { return form_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::size_t term_count() const noexcept { return terms_->size(); }

  /// Affine exponent vectors, shared by every equation.
  [[nodiscard]] const std::vector<std::vector<unsigned>>& terms() const noexcept { return *terms_; }
  [[nodiscard]] MultiIndex index(std::size_t rank) const;

  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coefficients_; }
  [[nodiscard]] std::span<const double> equation(std::size_t l) const noexcept {
    return {coefficients_.data() + l * term_count(), term_count()};
  }
  [[nodiscard]] double coefficient(std::size_t l, std::size_t rank) const noexcept {
    return coefficients_[l * term_count() + rank];
  }

 private:
  unsigned m_;
  unsigned d_;
  Form form_;
  std::uint64_t seed_;
  std::shared_ptr<const std::vector<std::vector<unsigned>>> terms_;
  std::vector<double> coefficients_;
};

/// Draws a KSS system: coefficient (l, j) is N(0, multinomial(d; j)).
/// Coefficient (l, rank) is a pure function of (seed, l, rank).
KssSystem sample_system(unsigned m, unsigned d, std::uint64_t seed);

/// Same coefficients, reinterpreted as homogeneous polynomials in (t0, t1, ..., tm).
KssSystem homogenize(const KssSystem& system);

/// Evaluates the affine system at t in R^m.
/// m = 1 uses compensated Horner (error ~ eps|p(t)| + eps^2 cond); m > 1 sums monomials
/// from precomputed power tables (error <= gamma_{d+m} * sum |a_j t^j|).
std::vector<double> eval_affine(const KssSystem& system, std::span<const double> t);

/// Evaluates the homogeneous system at any u in R^{m+1}.
std::vector<double> eval_homogeneous(const KssSystem& system, std::span<const double> u);

/// Sphere evaluation. Requires the homogeneous form.
std::vector<double> eval_system(const KssSystem& system, const SpherePoint& point);

/// Free gradient: entry (l, i) = dY_l/du_i, an m x (m+1) matrix. Homogeneous form.
Matrix free_gradient(const KssSystem& system, std::span<const double> u);

/// Spherical gradient projected back into R^{m+1}: row l is the free gradient minus its
/// component along the point. Rows are tangent to the sphere at the point.
Matrix projected_gradient(const KssSystem& system, const SpherePoint& point);

/// Spherical derivative in a tangent basis: entry (l, k) = <grad Y_l(t), v_k>.
/// With `scaled`, the entries are divided by sqrt(d) (unit-variance standardization).
Matrix spherical_gradient(const KssSystem& system, const SpherePoint& point,
                          const std::vector<std::vector<double>>& tangent_basis, bool scaled = false);

/// An orthonormal basis of the tangent space at `point` (Householder completion).
std::vector<std::vector<double>> tangent_basis(const SpherePoint& point);

/// Tangent bases for a pair (s, t) rotated to the canonical position
/// s = e0, t = cos(psi) e0 + sin(psi) e1:
///   at s: {e1, ..., em};  at t: {cos(psi) e1 - sin(psi) e0, e2, ..., em}
/// expressed back in the original coordinates. With these bases the joint covariance of
/// (Y(s), Y(t), Y'(s)/sqrt(d), Y'(t)/sqrt(d)) is the block matrix built by
/// `kacrice::joint_covariance`.
struct PairFrames {
  double psi = 0.0;
  std::vector<std::vector<double>> at_s;
  std::vector<std::vector<double>> at_t;
};
PairFrames canonical_pair_frames(const SpherePoint& s, const SpherePoint& t);

/// KSS covariance kernel on the sphere: E[Y_l(s) Y_l(t)] = <s, t>^d.
double covariance(const SpherePoint& s, const SpherePoint& t, unsigned d);

/// JSON {m, d, form, seed, coefficients}. Doubles round-trip bit-exactly.
std::string to_json(const KssSystem& system);
KssSystem system_from_json(const std::string& text);

}  // namespace kssvar
