#include <atomic>

#include "kernel_tables.hpp"
#include "pws/kernels.hpp"

namespace pws::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PWS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* best_table() {
  if (const auto* t = avx2_table()) return t;
  if (const auto* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{best_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(PWS_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(PWS_HAVE_NEON)
  return &detail::neon_table_unchecked();
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select_backend(Backend backend) {
  const KernelTable* table = nullptr;
  switch (backend) {
    case Backend::automatic: table = best_table(); break;
    case Backend::scalar: table = &scalar_table(); break;
    case Backend::avx2: table = avx2_table(); break;
    case Backend::neon: table = neon_table(); break;
  }
  if (table == nullptr) return false;
  current().store(table, std::memory_order_relaxed);
  return true;
}

}  // namespace pws::kernels
