#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kssvar/system.hpp"

namespace kssvar::rootcount {

enum class Method { sturm, sphere_subdivision, sphere_subdivision_extended };

std::string to_string(Method method);

struct RootCountResult {
  unsigned count = 0;
  bool certified = false;
  unsigned unresolved_regions = 0;
  unsigned long long bezout_cap = 0;
  Method method = Method::sturm;
  /// A verified root within 1e-12 of the equator t0 = 0. The caller should redraw.
  bool equator_root = false;
};

/// Exact count of distinct real roots of sum_i coeffs[i] t^i.
/// Coefficients are converted exactly to integers and fed to a subresultant Sturm chain.
/// Throws std::invalid_argument for the zero polynomial or a zero leading coefficient.
/// `max_bits` caps intermediate coefficient size; exceeding it returns certified = false.
RootCountResult count_univariate(std::span<const double> coeffs, std::size_t max_bits = std::size_t{1} << 24);

struct SubdivisionOptions {
  double min_width = 1e-9;     // cells narrower than this are reported unresolved
  double inflation = 0.1;      // relative enlargement of the Krawczyk box
  std::size_t max_cells = 4'000'000;
  bool escalate = true;        // retry unresolved cells in long double
};

/// Verified zeros of the homogenized system on the faces u_i = +1 of the cube [-1,1]^{m+1}.
/// Every line through the origin meets one of these faces, so the number of distinct lines
/// equals the number of antipodal root pairs on S^m, i.e. the number of affine real roots
/// when no root sits on the equator.
struct SphereRoots {
  RootCountResult result;
  std::vector<std::vector<double>> roots;  // unit vectors, one per antipodal pair, roots[k][0] >= 0
};
SphereRoots sphere_roots(const KssSystem& system, const SubdivisionOptions& options = {});

/// Real roots of the affine system in R^m (any m >= 1; accepts either form).
RootCountResult count_system(const KssSystem& system, const SubdivisionOptions& options = {});

/// Counting policy used by the Monte Carlo drivers: subdivision, with exact Sturm as the
/// fallback for m = 1 when subdivision is not certified.
RootCountResult count_real_roots(const KssSystem& system, const SubdivisionOptions& options = {});

}  // namespace kssvar::rootcount
