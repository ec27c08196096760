#include "kssvar/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace kssvar::quad {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece kronrod(const Function& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {a, b, k * h, std::fabs((k - g) * h)};
}

}  // namespace

QuadResult adaptive(const Function& f, double a, double b, double abs_tol, double rel_tol, std::size_t max_intervals) {
  QuadResult r;
  if (a == b) {
    r.converged = true;
    r.partition = {{a, b}};
    return r;
  }
  std::priority_queue<Piece> heap;
  heap.push(kronrod(f, a, b));
  r.evaluations = 15;
  double value = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(abs_tol, rel_tol * std::fabs(value)) && heap.size() < max_intervals) {
    const Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(p.a < mid && mid < p.b)) {
      heap.push(p);
      break;
    }
    const Piece l = kronrod(f, p.a, mid);
    const Piece h = kronrod(f, mid, p.b);
    r.evaluations += 30;
    value += l.value + h.value - p.value;
    error += l.error + h.error - p.error;
    heap.push(l);
    heap.push(h);
  }
  // Re-sum from scratch to avoid drift from the running updates.
  r.value = 0.0;
  r.error = 0.0;
  while (!heap.empty()) {
    const Piece& p = heap.top();
    r.value += p.value;
    r.error += p.error;
    r.partition.emplace_back(p.a, p.b);
    heap.pop();
  }
  std::sort(r.partition.begin(), r.partition.end());
  r.converged = r.error <= std::max(abs_tol, rel_tol * std::fabs(r.value));
  return r;
}

double on_partition(const Function& f, const Partition& partition) {
  double s = 0.0;
  for (const auto& [a, b] : partition) s += kronrod(f, a, b).value;
  return s;
}

Rule gauss_hermite(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_hermite: n must be positive");
  // Golub-Welsch on the Jacobi matrix of the probabilists' polynomials.
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(ni), sub(std::max<Eigen::Index>(ni - 1, 0));
  for (Eigen::Index k = 1; k < ni; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigen solver failed");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Eigenvector components of the outer nodes carry only absolute accuracy, so polish each node by Newton
  // on the orthonormal recurrence and take w = 1 / sum_k p_k(x)^2.
  auto orthonormal = [n](double x, double& pn, double& dpn) {
    double p0 = 1.0, p1 = x, sum = 1.0 + x * x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double p2 = (x * p1 - std::sqrt(kd - 1.0) * p0) / std::sqrt(kd);
      p0 = p1;
      p1 = p2;
      if (k < n) sum += p1 * p1;
    }
    if (n == 1) sum = 1.0;
    pn = p1;
    dpn = std::sqrt(static_cast<double>(n)) * p0;
    return sum;
  };
  for (Eigen::Index i = 0; i < ni; ++i) {
    double x = es.eigenvalues()[i], pn = 0.0, dpn = 0.0;
    for (int it = 0; it < 3; ++it) {
      orthonormal(x, pn, dpn);
      if (dpn != 0.0) x -= pn / dpn;
    }
    r.nodes[i] = x;
    r.weights[i] = 1.0 / orthonormal(x, pn, dpn);
  }
  // symmetrize to remove round-off asymmetry
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]), w = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2) r.nodes[n / 2] = 0.0;
  return r;
}

Rule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2 * jd - 1) * z * p2 - (jd - 1) * p3) / jd;
      }
      pp = nd * (z * p1 - p2) / (z * z - 1);
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) <= 1e-16) break;
    }
    const double w = 2.0 / ((1 - z * z) * pp * pp);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    r.nodes[i] = c - h * z;
    r.nodes[n - 1 - i] = c + h * z;
    r.weights[i] = r.weights[n - 1 - i] = w * h;
  }
  return r;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 2 matching points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: x must be strictly increasing");
  m_.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
    const double p = sig * m_[i - 1] + 2.0;
    m_[i] = (sig - 1.0) / p;
    u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) - (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
    u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
  }
  m_[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) m_[k] = m_[k] * m_[k + 1] + u[k];
}

double CubicSpline::operator()(double t) const {
  if (x_.empty()) throw std::logic_error("CubicSpline: empty");
  std::size_t hi = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin());
  hi = std::clamp<std::size_t>(hi, 1, x_.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - t) / h;
  const double b = (t - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] + ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * (h * h) / 6.0;
}

}  // namespace kssvar::quad
