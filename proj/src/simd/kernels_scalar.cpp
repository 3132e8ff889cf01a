#include "ltlab/simd/kernels.hpp"

namespace ltlab::simd {
namespace {

void philox_blocks_scalar(PhiloxKey key, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                          std::uint32_t first, std::size_t count, std::uint32_t* out) {
  for (std::size_t i = 0; i < count; ++i) {
    const PhiloxBlock b =
        philox4x32_10({first + static_cast<std::uint32_t>(i), c1, c2, c3}, key);
    out[4 * i + 0] = b[0];
    out[4 * i + 1] = b[1];
    out[4 * i + 2] = b[2];
    out[4 * i + 3] = b[3];
  }
}

std::size_t count_at_least_scalar(const double* x, std::size_t n, double threshold) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] >= threshold;
  return c;
}

std::size_t count_at_most_scalar(const double* x, std::size_t n, double threshold) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] <= threshold;
  return c;
}

std::size_t count_in_range_scalar(const double* x, std::size_t n, double lo, double hi) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x[i] >= lo) & (x[i] <= hi);
  return c;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void stencil_apply_scalar(const double* x, const double* mask, double* y, std::size_t width,
                          std::size_t begin, std::size_t end) {
  for (std::size_t c = begin; c < end; ++c) {
    double v = 4.0 * x[c];
    v -= x[c - 1];
    v -= x[c + 1];
    v -= x[c - width];
    v -= x[c + width];
    y[c] = mask[c] * v;
  }
}

void dynkin_lhs_scalar(const double* local_time, const double* h, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double sq = h[i] * h[i];
    out[i] = local_time[i] + 0.5 * sq;
  }
}

void dynkin_rhs_scalar(const double* h, double shift, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = h[i] + shift;
    const double sq = s * s;
    out[i] = 0.5 * sq;
  }
}

}  // namespace

const Kernels& scalar_kernels() noexcept {
  static const Kernels k{Isa::Scalar,           "scalar",
                         philox_blocks_scalar,  count_at_least_scalar,
                         count_at_most_scalar,  count_in_range_scalar,
                         axpy_scalar,           dot_scalar,
                         stencil_apply_scalar,  dynkin_lhs_scalar,
                         dynkin_rhs_scalar};
  return k;
}

}  // namespace ltlab::simd
