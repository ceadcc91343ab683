#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kslog {

// Dense row-major matrix of doubles. Sized for state spaces (phi <= 8) and
// n x n pairwise tables; nothing clever.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }

  Matrix transposed() const;
  std::vector<double> apply(std::span<const double> v) const;  // M v
  double max_abs_diff(const Matrix& other) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Gaussian elimination with partial pivoting.
double determinant(const Matrix& m);

}  // namespace kslog
