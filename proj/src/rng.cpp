#include "ltlab/rng.hpp"

#include <cmath>

#include "ltlab/simd/kernels.hpp"

namespace ltlab {

void RandomStream::refill() noexcept {
  // Short first fill: most excursions on small graphs need only a few words.
  const std::size_t blocks = next_block_ == 0 ? 1 : buffer_.size() / 4;
  simd::active().philox_blocks(key_, c1_, c2_, c3_, next_block_, blocks, buffer_.data());
  next_block_ += static_cast<std::uint32_t>(blocks);
  filled_ = static_cast<std::uint32_t>(4 * blocks);
  pos_ = 0;
}

double RandomStream::exponential() noexcept { return -std::log(uniform_open()); }

std::uint64_t RandomStream::bounded(std::uint64_t n) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace ltlab
