#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ltlab/rng.hpp"
#include "ltlab/simd/kernels.hpp"

using namespace ltlab;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  RandomStream r(seed, Domain::User, 0);
  std::vector<double> v(n);
  for (double& x : v) x = 4.0 * r.uniform_open() - 1.0;
  return v;
}


}  // namespace

TEST(Simd, ScalarPhiloxMatchesReference) {
  const simd::Kernels& s = simd::scalar_kernels();
  const PhiloxKey key{0x1234u, 0x9876u};
  std::vector<std::uint32_t> out(4 * 37);
  s.philox_blocks(key, 5, 6, 7, 100, 37, out.data());
  for (std::uint32_t i = 0; i < 37; ++i) {
    const PhiloxBlock b = philox4x32_10({100 + i, 5, 6, 7}, key);
    for (int w = 0; w < 4; ++w) ASSERT_EQ(out[4 * i + w], b[w]);
  }
}

TEST(Simd, PhiloxVariantsAgree) {
  const simd::Kernels* v = simd::avx2_kernels();
  if (!v) GTEST_SKIP() << "AVX2 variant unavailable";
  for (std::size_t count : {1u, 3u, 8u, 33u, 1000u}) {
    std::vector<std::uint32_t> a(4 * count), b(4 * count);
    simd::scalar_kernels().philox_blocks({1, 2}, 3, 4, 5, 0xfffffff0u, count, a.data());
    v->philox_blocks({1, 2}, 3, 4, 5, 0xfffffff0u, count, b.data());
    EXPECT_EQ(a, b) << "count " << count;
  }
}

TEST(Simd, CountsAgree) {
  const simd::Kernels* v = simd::avx2_kernels();
  if (!v) GTEST_SKIP() << "AVX2 variant unavailable";
  const simd::Kernels& s = simd::scalar_kernels();
  for (std::size_t n : {0u, 1u, 5u, 64u, 1001u}) {
    auto x = noise(n, n);
    if (n > 3) x[2] = 1.0;  // exactly on a threshold
    EXPECT_EQ(s.count_at_least(x.data(), n, 1.0), v->count_at_least(x.data(), n, 1.0));
    EXPECT_EQ(s.count_at_most(x.data(), n, 1.0), v->count_at_most(x.data(), n, 1.0));
    EXPECT_EQ(s.count_in_range(x.data(), n, -0.5, 1.0), v->count_in_range(x.data(), n, -0.5, 1.0));
  }
}

TEST(Simd, ScalarCountsAreClosed) {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const simd::Kernels& s = simd::scalar_kernels();
  EXPECT_EQ(s.count_at_least(x.data(), 4, 1.0), 3u);
  EXPECT_EQ(s.count_at_most(x.data(), 4, 1.0), 2u);
  EXPECT_EQ(s.count_in_range(x.data(), 4, 1.0, 2.0), 2u);
}

TEST(Simd, ElementwiseBitIdentical) {
  const simd::Kernels* v = simd::avx2_kernels();
  if (!v) GTEST_SKIP() << "AVX2 variant unavailable";
  const simd::Kernels& s = simd::scalar_kernels();
  const std::size_t n = 1003;
  const auto L = noise(n, 1), h = noise(n, 2);
  std::vector<double> a(n), b(n);
  s.dynkin_lhs(L.data(), h.data(), a.data(), n);
  v->dynkin_lhs(L.data(), h.data(), b.data(), n);
  EXPECT_EQ(a, b);
  s.dynkin_rhs(h.data(), 2.0, a.data(), n);
  v->dynkin_rhs(h.data(), 2.0, b.data(), n);
  EXPECT_EQ(a, b);

  // 20 x 12 padded grid, interior mask.
  const std::size_t w = 20, rows = 12;
  const auto x = noise(w * rows, 3);
  std::vector<double> mask(w * rows, 0.0);
  for (std::size_t r = 1; r + 1 < rows; ++r) {
    for (std::size_t c = 1; c + 1 < w; ++c) mask[r * w + c] = 1.0;
  }
  std::vector<double> ya(w * rows, -7.0), yb(w * rows, -7.0);
  s.stencil_apply(x.data(), mask.data(), ya.data(), w, w, w * rows - w);
  v->stencil_apply(x.data(), mask.data(), yb.data(), w, w, w * rows - w);
  EXPECT_EQ(ya, yb);
}

TEST(Simd, ReductionsAgreeToRounding) {
  const simd::Kernels* v = simd::avx2_kernels();
  if (!v) GTEST_SKIP() << "AVX2 variant unavailable";
  const simd::Kernels& s = simd::scalar_kernels();
  const std::size_t n = 4097;
  const auto x = noise(n, 4), y0 = noise(n, 5);
  EXPECT_NEAR(s.dot(x.data(), y0.data(), n), v->dot(x.data(), y0.data(), n), 1e-11);
  auto ya = y0, yb = y0;
  s.axpy(0.3, x.data(), ya.data(), n);
  v->axpy(0.3, x.data(), yb.data(), n);
  for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(ya[i], yb[i], 1e-15);
}

TEST(Simd, StencilIsTheWiredLaplacian) {
  // 3x3 vertices inside a 5x5 padded grid; x = 1 on V gives 4 - #neighbours in V.
  const std::size_t w = 5;
  std::vector<double> x(25, 0.0), mask(25, 0.0), y(25, 0.0);
  for (std::size_t r = 1; r <= 3; ++r) {
    for (std::size_t c = 1; c <= 3; ++c) x[r * w + c] = mask[r * w + c] = 1.0;
  }
  simd::scalar_kernels().stencil_apply(x.data(), mask.data(), y.data(), w, w, 20);
  EXPECT_EQ(y[1 * w + 1], 2.0);
  EXPECT_EQ(y[1 * w + 2], 1.0);
  EXPECT_EQ(y[2 * w + 2], 0.0);
  EXPECT_EQ(y[0 * w + 2], 0.0);
}

TEST(Simd, SelectRoundTrip) {
  const simd::Isa before = simd::active().isa;
  EXPECT_TRUE(simd::select(simd::Isa::Scalar));
  EXPECT_EQ(simd::active().isa, simd::Isa::Scalar);
  if (simd::avx2_kernels()) {
    EXPECT_TRUE(simd::select(simd::Isa::Avx2));
  }
  simd::select(before);
  EXPECT_EQ(simd::isa_name(simd::Isa::Scalar), "scalar");
}
