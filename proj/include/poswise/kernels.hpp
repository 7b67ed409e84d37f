#pragma once

// Data-parallel inner loops behind Matrix and the activation functions.
//
// Every backend must produce results bit-identical to the scalar reference:
// element-wise kernels are exact IEEE operations, and gemm keeps each output
// element's reduction in ascending k order starting from +0.0, using separate
// multiply and add (never fused).

#include <cstddef>
#include <string_view>
#include <vector>

namespace poswise::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

struct KernelTable {
  Backend backend;
  /// c[m x n] = a[m x k] * b[k x n], all row-major and densely packed.
  void (*gemm)(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
               std::size_t n);
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  /// out = w - eta * g
  void (*axpy)(const double* w, const double* g, double eta, double* out, std::size_t n);
  /// out = a + s
  void (*add_scalar)(const double* a, double s, double* out, std::size_t n);
  void (*relu)(const double* y, double* out, std::size_t n);
  void (*relu_prime)(const double* y, double* out, std::size_t n);
};

std::string_view backend_name(Backend backend) noexcept;

/// Backends usable on this machine: compiled in and supported by the CPU.
std::vector<Backend> available_backends();

/// Best available backend, chosen on first use.
Backend detect_best_backend();

const KernelTable& active();

/// Returns the table for `backend`; throws std::invalid_argument if unavailable.
const KernelTable& table_for(Backend backend);

/// Overrides the automatic choice; used by equivalence tests.
void select_backend(Backend backend);

/// Restores select_backend's previous choice on scope exit.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend);
  ~ScopedBackend();
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

namespace detail {
const KernelTable& scalar_table();
#if defined(POSWISE_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table();
#endif
#if defined(POSWISE_HAVE_NEON_KERNELS)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace poswise::kernels
