#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace poswise {

class SeededRng;

/// Dense row-major matrix of doubles.
///
/// A default-constructed Matrix is an empty 0x0 placeholder; every other
/// constructor requires both dimensions to be positive.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::string shape_string() const;

  /// Value equality (0.0 == -0.0, NaN != NaN). Use bitwise_equal for reproducibility checks.
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// True when shapes match and every entry has the same bit pattern.
bool bitwise_equal(const Matrix& a, const Matrix& b) noexcept;

bool all_finite(const Matrix& a) noexcept;

enum class ElementwiseOp { kAdd, kSub, kMul };

/// a * b with the reduction over the shared dimension summed in ascending order.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix elementwise(const Matrix& a, const Matrix& b, ElementwiseOp op);
inline Matrix add(const Matrix& a, const Matrix& b) { return elementwise(a, b, ElementwiseOp::kAdd); }
inline Matrix sub(const Matrix& a, const Matrix& b) { return elementwise(a, b, ElementwiseOp::kSub); }
inline Matrix hadamard(const Matrix& a, const Matrix& b) { return elementwise(a, b, ElementwiseOp::kMul); }

/// w - eta * g
Matrix scale_and_axpy(const Matrix& w, const Matrix& g, double eta);

/// Adds column vector v (m x 1) to every column of a (m x n).
Matrix broadcast_add_col(const Matrix& a, const Matrix& v);

/// m x 1 vector of per-row sums, columns accumulated left to right.
Matrix row_sums(const Matrix& a);

Matrix scaled(const Matrix& a, double factor);

/// i.i.d. N(mu, sigma) draws in row-major order; sigma is a standard deviation.
Matrix draw_normal(SeededRng& rng, std::size_t rows, std::size_t cols, double mu, double sigma);

}  // namespace poswise
