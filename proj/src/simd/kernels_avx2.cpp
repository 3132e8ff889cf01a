#include <immintrin.h>

#include <bit>

#include "ltlab/simd/kernels.hpp"

namespace ltlab::simd {
namespace {

// High 32 bits of the 8 lane-wise 32x32 products.
inline __m256i mulhi_epu32(__m256i a, __m256i m) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  return _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

void philox_blocks_avx2(PhiloxKey key, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                        std::uint32_t first, std::size_t count, std::uint32_t* out) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);

  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    __m256i x0 = _mm256_add_epi32(
        _mm256_set1_epi32(static_cast<int>(first + static_cast<std::uint32_t>(i))), lane);
    __m256i x1 = _mm256_set1_epi32(static_cast<int>(c1));
    __m256i x2 = _mm256_set1_epi32(static_cast<int>(c2));
    __m256i x3 = _mm256_set1_epi32(static_cast<int>(c3));
    std::uint32_t k0 = key.k0;
    std::uint32_t k1 = key.k1;
    for (int round = 0; round < 10; ++round) {
      const __m256i hi0 = mulhi_epu32(x0, m0);
      const __m256i lo0 = _mm256_mullo_epi32(x0, m0);
      const __m256i hi1 = mulhi_epu32(x2, m1);
      const __m256i lo1 = _mm256_mullo_epi32(x2, m1);
      const __m256i y0 =
          _mm256_xor_si256(_mm256_xor_si256(hi1, x1), _mm256_set1_epi32(static_cast<int>(k0)));
      const __m256i y2 =
          _mm256_xor_si256(_mm256_xor_si256(hi0, x3), _mm256_set1_epi32(static_cast<int>(k1)));
      x0 = y0;
      x1 = lo1;
      x2 = y2;
      x3 = lo0;
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    alignas(32) std::uint32_t w[4][8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[0]), x0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[1]), x1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[2]), x2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[3]), x3);
    std::uint32_t* o = out + 4 * i;
    for (int b = 0; b < 8; ++b) {
      o[4 * b + 0] = w[0][b];
      o[4 * b + 1] = w[1][b];
      o[4 * b + 2] = w[2][b];
      o[4 * b + 3] = w[3][b];
    }
  }
  for (; i < count; ++i) {
    const PhiloxBlock b = philox4x32_10({first + static_cast<std::uint32_t>(i), c1, c2, c3}, key);
    for (int w = 0; w < 4; ++w) out[4 * i + w] = b[w];
  }
}

template <int Pred>
std::size_t count_cmp(const double* x, std::size_t n, double threshold) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(x + i), t, Pred);
    c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
  }
  for (; i < n; ++i) {
    if constexpr (Pred == _CMP_GE_OQ) {
      c += x[i] >= threshold;
    } else {
      c += x[i] <= threshold;
    }
  }
  return c;
}

std::size_t count_at_least_avx2(const double* x, std::size_t n, double threshold) {
  return count_cmp<_CMP_GE_OQ>(x, n, threshold);
}

std::size_t count_at_most_avx2(const double* x, std::size_t n, double threshold) {
  return count_cmp<_CMP_LE_OQ>(x, n, threshold);
}

std::size_t count_in_range_avx2(const double* x, std::size_t n, double lo, double hi) {
  const __m256d l = _mm256_set1_pd(lo);
  const __m256d h = _mm256_set1_pd(hi);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d m = _mm256_and_pd(_mm256_cmp_pd(v, l, _CMP_GE_OQ), _mm256_cmp_pd(v, h, _CMP_LE_OQ));
    c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
  }
  for (; i < n; ++i) c += (x[i] >= lo) & (x[i] <= hi);
  return c;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(s0, s1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void stencil_apply_avx2(const double* x, const double* mask, double* y, std::size_t width,
                        std::size_t begin, std::size_t end) {
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t c = begin;
  for (; c + 4 <= end; c += 4) {
    __m256d v = _mm256_mul_pd(four, _mm256_loadu_pd(x + c));
    v = _mm256_sub_pd(v, _mm256_loadu_pd(x + c - 1));
    v = _mm256_sub_pd(v, _mm256_loadu_pd(x + c + 1));
    v = _mm256_sub_pd(v, _mm256_loadu_pd(x + c - width));
    v = _mm256_sub_pd(v, _mm256_loadu_pd(x + c + width));
    _mm256_storeu_pd(y + c, _mm256_mul_pd(_mm256_loadu_pd(mask + c), v));
  }
  for (; c < end; ++c) {
    double v = 4.0 * x[c];
    v -= x[c - 1];
    v -= x[c + 1];
    v -= x[c - width];
    v -= x[c + width];
    y[c] = mask[c] * v;
  }
}

void dynkin_lhs_avx2(const double* local_time, const double* h, double* out, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d hv = _mm256_loadu_pd(h + i);
    const __m256d sq = _mm256_mul_pd(hv, hv);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(local_time + i), _mm256_mul_pd(half, sq)));
  }
  for (; i < n; ++i) {
    const double sq = h[i] * h[i];
    out[i] = local_time[i] + 0.5 * sq;
  }
}

void dynkin_rhs_avx2(const double* h, double shift, double* out, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d sh = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_add_pd(_mm256_loadu_pd(h + i), sh);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(half, _mm256_mul_pd(s, s)));
  }
  for (; i < n; ++i) {
    const double s = h[i] + shift;
    const double sq = s * s;
    out[i] = 0.5 * sq;
  }
}

}  // namespace

const Kernels& avx2_kernel_table() noexcept {
  static const Kernels k{Isa::Avx2,          "avx2",
                         philox_blocks_avx2, count_at_least_avx2,
                         count_at_most_avx2, count_in_range_avx2,
                         axpy_avx2,          dot_avx2,
                         stencil_apply_avx2, dynkin_lhs_avx2,
                         dynkin_rhs_avx2};
  return k;
}

}  // namespace ltlab::simd
