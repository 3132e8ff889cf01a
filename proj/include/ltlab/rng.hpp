#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace ltlab {

// Philox4x32-10 counter-based generator. Every random quantity in the
// library is addressed by (seed, domain, index, block), so results never
// depend on how work is split between threads.
struct PhiloxKey {
  std::uint32_t k0 = 0;
  std::uint32_t k1 = 0;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxBlock = std::array<std::uint32_t, 4>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr PhiloxBlock philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key.k0,
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key.k1,
           static_cast<std::uint32_t>(p0)};
    key.k0 += kPhiloxW0;
    key.k1 += kPhiloxW1;
  }
  return ctr;
}

/// Purpose tags that separate independent random streams under one seed.
enum class Domain : std::uint32_t {
  ExcursionCount = 1,
  Excursion = 2,
  Holding = 3,
  HoldingPerVisit = 4,
  CoverClock = 5,
  Gaussian = 6,
  SingleSite = 7,
  Replica = 8,
  User = 9,
};

/// Compose a domain tag with a 24-bit sub-index (e.g. an extension epoch).
constexpr std::uint32_t domain_word(Domain d, std::uint32_t sub = 0) noexcept {
  return (static_cast<std::uint32_t>(d) << 24) | (sub & 0x00FFFFFFu);
}

/// SplitMix64 finalizer; used to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ull));
}

/// A single addressable stream: counter words 1..3 are fixed by
/// (domain, index), word 0 walks through blocks. Satisfies
/// UniformRandomBitGenerator with 64-bit output so it can feed <random>
/// distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream() = default;
  RandomStream(std::uint64_t seed, std::uint32_t domain, std::uint64_t index,
               std::uint32_t first_block = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        c1_(domain),
        c2_(static_cast<std::uint32_t>(index)),
        c3_(static_cast<std::uint32_t>(index >> 32)),
        next_block_(first_block) {}
  RandomStream(std::uint64_t seed, Domain domain, std::uint64_t index) noexcept
      : RandomStream(seed, domain_word(domain), index) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  std::uint32_t next_u32() noexcept {
    if (pos_ == filled_) refill();
    return buffer_[pos_++];
  }

  result_type operator()() noexcept {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform on the open interval (0,1) with 53-bit resolution.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exp(1), strictly positive.
  double exponential() noexcept;

  /// Uniform integer in [0, n) by Lemire's multiply-and-reject; n > 0.
  std::uint64_t bounded(std::uint64_t n) noexcept;

  std::uint32_t blocks_consumed() const noexcept { return next_block_; }

 private:
  void refill() noexcept;

  PhiloxKey key_{};
  std::uint32_t c1_ = 0;
  std::uint32_t c2_ = 0;
  std::uint32_t c3_ = 0;
  std::uint32_t next_block_ = 0;
  std::uint32_t pos_ = 0;
  std::uint32_t filled_ = 0;
  std::array<std::uint32_t, 32> buffer_{};
};

/// Two-bit lattice-direction source layered on a RandomStream.
class StepBits {
 public:
  explicit StepBits(RandomStream& s) noexcept : stream_(&s) {}
  unsigned next() noexcept {
    if (left_ == 0) {
      word_ = stream_->next_u32();
      left_ = 16;
    }
    const unsigned d = word_ & 3u;
    word_ >>= 2;
    --left_;
    return d;
  }

 private:
  RandomStream* stream_;
  std::uint32_t word_ = 0;
  unsigned left_ = 0;
};

}  // namespace ltlab
