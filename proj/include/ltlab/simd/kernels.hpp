#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version; one table is selected at startup from CPUID
// (override with LTLAB_SIMD=scalar|avx2). Integer kernels are bit-identical
// across variants; floating-point elementwise kernels use the same operation
// order (no FMA contraction) and are bit-identical too; reductions (dot) and
// axpy may differ in the last ulps.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "ltlab/rng.hpp"

namespace ltlab::simd {

enum class Isa { Scalar, Avx2 };

struct Kernels {
  Isa isa;
  const char* name;

  // out[4*i + w] = word w of philox(ctr = {first + i, c1, c2, c3}, key).
  void (*philox_blocks)(PhiloxKey key, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                        std::uint32_t first, std::size_t count, std::uint32_t* out);

  std::size_t (*count_at_least)(const double* x, std::size_t n, double threshold);
  std::size_t (*count_at_most)(const double* x, std::size_t n, double threshold);
  // Closed window [lo, hi].
  std::size_t (*count_in_range)(const double* x, std::size_t n, double lo, double hi);

  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);

  // Wired-Laplacian stencil on a zero-padded grid of the given row width:
  // y[c] = mask[c] * ((((4 x[c] - x[c-1]) - x[c+1]) - x[c-w]) - x[c+w])
  // for c in [begin, end). mask is 1.0 on lattice vertices, 0.0 elsewhere.
  void (*stencil_apply)(const double* x, const double* mask, double* y, std::size_t width,
                        std::size_t begin, std::size_t end);

  // out = L + 0.5*h*h  and  out = 0.5*(h + shift)^2.
  void (*dynkin_lhs)(const double* local_time, const double* h, double* out, std::size_t n);
  void (*dynkin_rhs)(const double* h, double shift, double* out, std::size_t n);
};

const Kernels& scalar_kernels() noexcept;

/// nullptr when not compiled in or not supported by this CPU.
const Kernels* avx2_kernels() noexcept;

/// The table used by the library.
const Kernels& active() noexcept;

/// Force a variant; returns false (and leaves the selection unchanged) when
/// the variant is unavailable.
bool select(Isa isa) noexcept;

std::string_view isa_name(Isa isa) noexcept;

}  // namespace ltlab::simd
