#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace kssvar::quad {

using Function = std::function<double(double)>;
using Partition = std::vector<std::pair<double, double>>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // sum of local Gauss/Kronrod differences
  bool converged = false;
  std::size_t evaluations = 0;
  Partition partition;  // final subintervals, sorted
};

/// Adaptive Gauss-Kronrod (G7/K15) with global bisection of the worst subinterval.
/// Stops when error <= max(abs_tol, rel_tol * |value|).
QuadResult adaptive(const Function& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                    std::size_t max_intervals = 4000);

/// K15 sum over a fixed partition (reuses the nodes of a previous adaptive run).
double on_partition(const Function& f, const Partition& partition);

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for the standard normal weight: sum w_i f(x_i) ~ E f(xi).
Rule gauss_hermite(std::size_t n);

/// Gauss-Legendre rule on [a, b].
Rule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Natural cubic spline through (x_i, y_i) with strictly increasing x.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;
  [[nodiscard]] bool empty() const noexcept { return x_.empty(); }
  [[nodiscard]] double front() const { return x_.front(); }
  [[nodiscard]] double back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives
};

}  // namespace kssvar::quad
