// AVX2 kernels, four doubles per lane group. This translation unit is the only
// one built with -mavx2; nothing here runs unless dispatch saw AVX2 at runtime.

#include <immintrin.h>

#include "poswise/kernels.hpp"

namespace poswise::kernels::detail {
namespace {

constexpr std::size_t kLanes = 4;

// Scalar tail for gemm columns that do not fill a vector; same order as the
// reference kernel.
void gemm_tail(const double* a, const double* b, double* c, std::size_t i_begin,
               std::size_t i_end, std::size_t j_begin, std::size_t k, std::size_t n) {
  for (std::size_t i = i_begin; i < i_end; ++i) {
    for (std::size_t j = j_begin; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) sum += a[i * k + p] * b[p * n + j];
      c[i * n + j] = sum;
    }
  }
}

// 4 x 8 register tile. Each accumulator lane owns one output element and sees
// the k terms in ascending order, so results match the scalar kernel exactly.
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
          std::size_t n) {
  const std::size_t n8 = n - n % 8;
  const std::size_t n4 = n - n % kLanes;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* a0 = a + (i + 0) * k;
    const double* a1 = a + (i + 1) * k;
    const double* a2 = a + (i + 2) * k;
    const double* a3 = a + (i + 3) * k;
    std::size_t j = 0;
    for (; j < n8; j += 8) {
      __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
      __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
      __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
      __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const double* brow = b + p * n + j;
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        __m256d s = _mm256_broadcast_sd(a0 + p);
        c00 = _mm256_add_pd(c00, _mm256_mul_pd(s, b0));
        c01 = _mm256_add_pd(c01, _mm256_mul_pd(s, b1));
        s = _mm256_broadcast_sd(a1 + p);
        c10 = _mm256_add_pd(c10, _mm256_mul_pd(s, b0));
        c11 = _mm256_add_pd(c11, _mm256_mul_pd(s, b1));
        s = _mm256_broadcast_sd(a2 + p);
        c20 = _mm256_add_pd(c20, _mm256_mul_pd(s, b0));
        c21 = _mm256_add_pd(c21, _mm256_mul_pd(s, b1));
        s = _mm256_broadcast_sd(a3 + p);
        c30 = _mm256_add_pd(c30, _mm256_mul_pd(s, b0));
        c31 = _mm256_add_pd(c31, _mm256_mul_pd(s, b1));
      }
      _mm256_storeu_pd(c + (i + 0) * n + j, c00);
      _mm256_storeu_pd(c + (i + 0) * n + j + 4, c01);
      _mm256_storeu_pd(c + (i + 1) * n + j, c10);
      _mm256_storeu_pd(c + (i + 1) * n + j + 4, c11);
      _mm256_storeu_pd(c + (i + 2) * n + j, c20);
      _mm256_storeu_pd(c + (i + 2) * n + j + 4, c21);
      _mm256_storeu_pd(c + (i + 3) * n + j, c30);
      _mm256_storeu_pd(c + (i + 3) * n + j + 4, c31);
    }
    for (; j < n4; j += kLanes) {
      __m256d acc[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(),
                        _mm256_setzero_pd()};
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d bv = _mm256_loadu_pd(b + p * n + j);
        acc[0] = _mm256_add_pd(acc[0], _mm256_mul_pd(_mm256_broadcast_sd(a0 + p), bv));
        acc[1] = _mm256_add_pd(acc[1], _mm256_mul_pd(_mm256_broadcast_sd(a1 + p), bv));
        acc[2] = _mm256_add_pd(acc[2], _mm256_mul_pd(_mm256_broadcast_sd(a2 + p), bv));
        acc[3] = _mm256_add_pd(acc[3], _mm256_mul_pd(_mm256_broadcast_sd(a3 + p), bv));
      }
      for (std::size_t r = 0; r < 4; ++r) _mm256_storeu_pd(c + (i + r) * n + j, acc[r]);
    }
    gemm_tail(a, b, c, i, i + 4, n4, k, n);
  }
  for (; i < m; ++i) {
    const double* arow = a + i * k;
    std::size_t j = 0;
    for (; j < n4; j += kLanes) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        acc = _mm256_add_pd(acc,
                            _mm256_mul_pd(_mm256_broadcast_sd(arow + p), _mm256_loadu_pd(b + p * n + j)));
      }
      _mm256_storeu_pd(c + i * n + j, acc);
    }
    gemm_tail(a, b, c, i, i + 1, n4, k, n);
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(const double* w, const double* g, double eta, double* out, std::size_t n) {
  const __m256d e = _mm256_set1_pd(eta);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d step = _mm256_mul_pd(e, _mm256_loadu_pd(g + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), step));
  }
  for (; i < n; ++i) out[i] = w[i] - eta * g[i];
}

void add_scalar(const double* a, double s, double* out, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), sv));
  }
  for (; i < n; ++i) out[i] = a[i] + s;
}

// _mm256_max_pd returns its second operand unless the first is strictly
// greater, which gives +0.0 for -0.0 and NaN inputs, like the scalar form.
void relu(const double* y, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(y + i), zero));
  }
  for (; i < n; ++i) out[i] = y[i] > 0.0 ? y[i] : 0.0;
}

void relu_prime(const double* y, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(y + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(mask, one));
  }
  for (; i < n; ++i) out[i] = y[i] > 0.0 ? 1.0 : 0.0;
}

constexpr KernelTable kTable{Backend::kAvx2, gemm, add, sub, mul, axpy, add_scalar, relu,
                             relu_prime};

}  // namespace

const KernelTable& avx2_table() { return kTable; }

}  // namespace poswise::kernels::detail
