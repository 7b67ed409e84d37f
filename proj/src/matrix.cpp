#include "poswise/matrix.hpp"

#include <cmath>
#include <cstring>

#include "poswise/errors.hpp"
#include "poswise/kernels.hpp"
#include "poswise/rng.hpp"

namespace poswise {
namespace {

void require_positive(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("matrix dimensions must be positive, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_positive(rows, cols);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_positive(rows, cols);
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) + " does not match " +
                     shape_string());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  require_positive(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged initializer list for Matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Matrix::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

bool bitwise_equal(const Matrix& a, const Matrix& b) noexcept {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

bool all_finite(const Matrix& a) noexcept {
  for (double v : a.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.empty() || b.empty()) {
    throw ShapeError("matmul: inner dimensions differ, " + a.shape_string() + " * " +
                     b.shape_string());
  }
  Matrix c(a.rows(), b.cols());
  kernels::active().gemm(a.values().data(), b.values().data(), c.values().data(), a.rows(),
                         a.cols(), b.cols());
  return c;
}

Matrix transpose(const Matrix& a) {
  if (a.empty()) return {};
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Matrix elementwise(const Matrix& a, const Matrix& b, ElementwiseOp op) {
  require_same_shape(a, b, "elementwise");
  if (a.empty()) return {};
  Matrix out(a.rows(), a.cols());
  const auto& k = kernels::active();
  auto fn = op == ElementwiseOp::kAdd ? k.add : op == ElementwiseOp::kSub ? k.sub : k.mul;
  fn(a.values().data(), b.values().data(), out.values().data(), a.size());
  return out;
}

Matrix scale_and_axpy(const Matrix& w, const Matrix& g, double eta) {
  require_same_shape(w, g, "scale_and_axpy");
  if (!std::isfinite(eta)) throw std::invalid_argument("scale_and_axpy: eta must be finite");
  if (w.empty()) return {};
  Matrix out(w.rows(), w.cols());
  kernels::active().axpy(w.values().data(), g.values().data(), eta, out.values().data(),
                         w.size());
  return out;
}

Matrix broadcast_add_col(const Matrix& a, const Matrix& v) {
  if (v.cols() != 1 || v.rows() != a.rows() || a.empty()) {
    throw ShapeError("broadcast_add_col: need an (m x 1) vector for " + a.shape_string() +
                     ", got " + v.shape_string());
  }
  Matrix out(a.rows(), a.cols());
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    k.add_scalar(a.row(r).data(), v(r, 0), out.row(r).data(), a.cols());
  }
  return out;
}

Matrix row_sums(const Matrix& a) {
  if (a.empty()) throw ShapeError("row_sums: empty matrix");
  Matrix out(a.rows(), 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (double v : a.row(r)) sum += v;
    out(r, 0) = sum;
  }
  return out;
}

Matrix scaled(const Matrix& a, double factor) {
  Matrix out = a;
  for (double& v : out.values()) v *= factor;
  return out;
}

Matrix draw_normal(SeededRng& rng, std::size_t rows, std::size_t cols, double mu, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("draw_normal: sigma must be >= 0");
  Matrix out(rows, cols);
  for (double& v : out.values()) v = rng.normal(mu, sigma);
  return out;
}

}  // namespace poswise
