#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ltlab/simd/kernels.hpp"

namespace ltlab::simd {

#if defined(LTLAB_HAVE_AVX2)
const Kernels& avx2_kernel_table() noexcept;
#endif

const Kernels* avx2_kernels() noexcept {
#if defined(LTLAB_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Kernels* initial_selection() noexcept {
  const char* env = std::getenv("LTLAB_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& current() noexcept {
  static std::atomic<const Kernels*> table{initial_selection()};
  return table;
}

}  // namespace

const Kernels& active() noexcept { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) noexcept {
  const Kernels* k = isa == Isa::Scalar ? &scalar_kernels() : avx2_kernels();
  if (k == nullptr) return false;
  current().store(k, std::memory_order_release);
  return true;
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Scalar ? "scalar" : "avx2"; }

}  // namespace ltlab::simd
