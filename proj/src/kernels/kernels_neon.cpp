// AArch64 NEON kernels, two doubles per register. NEON is mandatory on
// AArch64, so this backend is always available when compiled in.

#include <arm_neon.h>

#include "poswise/kernels.hpp"

namespace poswise::kernels::detail {
namespace {

constexpr std::size_t kLanes = 2;

// vmulq + vaddq, never vfmaq: the reference kernel rounds after each multiply.
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
          std::size_t n) {
  const std::size_t n2 = n - n % kLanes;
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    std::size_t j = 0;
    for (; j < n2; j += kLanes) {
      float64x2_t acc = vdupq_n_f64(0.0);
      for (std::size_t p = 0; p < k; ++p) {
        acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(arow[p]), vld1q_f64(b + p * n + j)));
      }
      vst1q_f64(c + i * n + j, acc);
    }
    for (; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) sum += arow[p] * b[p * n + j];
      c[i * n + j] = sum;
    }
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(const double* w, const double* g, double eta, double* out, std::size_t n) {
  const float64x2_t e = vdupq_n_f64(eta);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vsubq_f64(vld1q_f64(w + i), vmulq_f64(e, vld1q_f64(g + i))));
  }
  for (; i < n; ++i) out[i] = w[i] - eta * g[i];
}

void add_scalar(const double* a, double s, double* out, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), sv));
  for (; i < n; ++i) out[i] = a[i] + s;
}

void relu(const double* y, double* out, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t v = vld1q_f64(y + i);
    vst1q_f64(out + i, vbslq_f64(vcgtq_f64(v, zero), v, zero));
  }
  for (; i < n; ++i) out[i] = y[i] > 0.0 ? y[i] : 0.0;
}

void relu_prime(const double* y, double* out, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vbslq_f64(vcgtq_f64(vld1q_f64(y + i), zero), one, zero));
  }
  for (; i < n; ++i) out[i] = y[i] > 0.0 ? 1.0 : 0.0;
}

constexpr KernelTable kTable{Backend::kNeon, gemm, add, sub, mul, axpy, add_scalar, relu,
                             relu_prime};

}  // namespace

const KernelTable& neon_table() { return kTable; }

}  // namespace poswise::kernels::detail
