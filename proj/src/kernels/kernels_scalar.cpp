// Scalar reference kernels. Every other backend is checked against these.

#include "poswise/kernels.hpp"

namespace poswise::kernels::detail {
namespace {

void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
          std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        sum += a[i * k + p] * b[p * n + j];
      }
      c[i * n + j] = sum;
    }
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(const double* w, const double* g, double eta, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i] - eta * g[i];
}

void add_scalar(const double* a, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s;
}

void relu(const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] > 0.0 ? y[i] : 0.0;
}

void relu_prime(const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] > 0.0 ? 1.0 : 0.0;
}

constexpr KernelTable kTable{Backend::kScalar, gemm, add, sub, mul, axpy, add_scalar, relu,
                             relu_prime};

}  // namespace

const KernelTable& scalar_table() { return kTable; }

}  // namespace poswise::kernels::detail
