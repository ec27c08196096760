#include "kssvar/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace kssvar {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double determinant(std::span<const double> a, std::size_t n) {
  switch (n) {
    case 0:
      return 1.0;
    case 1:
      return a[0];
    case 2:
      return a[0] * a[3] - a[1] * a[2];
    case 3:
      return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
             a[2] * (a[3] * a[7] - a[4] * a[6]);
    default:
      break;
  }
  std::vector<double> w(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n * n));
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(w[r * n + c]) > std::fabs(w[p * n + c])) p = r;
    if (w[p * n + c] == 0.0) return 0.0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w[p * n + j], w[c * n + j]);
      det = -det;
    }
    const double piv = w[c * n + c];
    det *= piv;
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = w[r * n + c] / piv;
      for (std::size_t j = c + 1; j < n; ++j) w[r * n + j] -= f * w[c * n + j];
    }
  }
  return det;
}

bool invert(const Matrix& a, Matrix& out) {
  const std::size_t n = a.rows();
  Matrix w = a;
  out = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(w(r, c)) > std::fabs(w(p, c))) p = r;
    if (!(std::fabs(w(p, c)) > 0.0)) return false;
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w(p, j), w(c, j));
        std::swap(out(p, j), out(c, j));
      }
    const double inv = 1.0 / w(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      w(c, j) *= inv;
      out(c, j) *= inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = w(r, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        w(r, j) -= f * w(c, j);
        out(r, j) -= f * out(c, j);
      }
    }
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace kssvar
