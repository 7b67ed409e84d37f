#include <atomic>
#include <stdexcept>
#include <string>

#include "poswise/kernels.hpp"

namespace poswise::kernels {
namespace {

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(POSWISE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(POSWISE_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&table_for(detect_best_backend())};
  return slot;
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (cpu_supports(b)) out.push_back(b);
  }
  return out;
}

Backend detect_best_backend() {
  static const Backend best = [] {
    if (cpu_supports(Backend::kAvx2)) return Backend::kAvx2;
    if (cpu_supports(Backend::kNeon)) return Backend::kNeon;
    return Backend::kScalar;
  }();
  return best;
}

const KernelTable& table_for(Backend backend) {
  if (!cpu_supports(backend)) {
    throw std::invalid_argument("kernel backend '" + std::string(backend_name(backend)) +
                                "' is not available on this machine");
  }
  switch (backend) {
#if defined(POSWISE_HAVE_AVX2_KERNELS)
    case Backend::kAvx2: return detail::avx2_table();
#endif
#if defined(POSWISE_HAVE_NEON_KERNELS)
    case Backend::kNeon: return detail::neon_table();
#endif
    default: return detail::scalar_table();
  }
}

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

void select_backend(Backend backend) {
  active_slot().store(&table_for(backend), std::memory_order_relaxed);
}

ScopedBackend::ScopedBackend(Backend backend) : previous_(active().backend) {
  select_backend(backend);
}

ScopedBackend::~ScopedBackend() { select_backend(previous_); }

}  // namespace poswise::kernels
