#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kssvar {

/// Small dense row-major matrix. Sizes here are at most a handful of rows.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

  [[nodiscard]] Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Determinant by Gaussian elimination with partial pivoting; closed forms for n <= 3.
double determinant(std::span<const double> a, std::size_t n);
inline double determinant(const Matrix& a) { return determinant(a.data(), a.rows()); }

/// Inverse via Gauss-Jordan with partial pivoting. Returns false if singular to working precision.
bool invert(const Matrix& a, Matrix& out);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace kssvar
