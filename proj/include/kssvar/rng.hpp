#pragma once

#include <array>
#include <cstdint>

namespace kssvar {

/// SplitMix64 finalizer. Used as the named mixing hash for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent child seed from a parent seed and an index.
/// Order-free: the result depends only on (parent, index).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// A block is a pure function of (key, counter); there is no hidden state.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit constexpr Philox4x32(std::uint64_t key) noexcept
      : key0_(static_cast<std::uint32_t>(key)), key1_(static_cast<std::uint32_t>(key >> 32)) {}

  [[nodiscard]] constexpr Block operator()(Block ctr) const noexcept {
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return ctr;
  }

 private:
  std::uint32_t key0_;
  std::uint32_t key1_;
};

/// Maps 53 random bits into the open interval (0, 1).
constexpr double bits_to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal quantile, Wichura's AS 241 (PPND16); relative accuracy ~1e-16.
double normal_quantile(double p) noexcept;

/// Stream of uniforms/normals addressed by (seed, stream id, position).
/// Two streams with the same (seed, stream) produce identical sequences regardless
/// of which thread consumes them.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : gen_(seed), stream_(stream) {}

  [[nodiscard]] std::uint64_t next_u64() noexcept {
    if (cached_) {
      cached_ = false;
      return cache_;
    }
    const Philox4x32::Block out = gen_({static_cast<std::uint32_t>(position_),
                                        static_cast<std::uint32_t>(position_ >> 32),
                                        static_cast<std::uint32_t>(stream_),
                                        static_cast<std::uint32_t>(stream_ >> 32)});
    ++position_;
    cache_ = (std::uint64_t{out[3]} << 32) | out[2];
    cached_ = true;
    return (std::uint64_t{out[1]} << 32) | out[0];
  }

  [[nodiscard]] double uniform() noexcept { return bits_to_open_unit(next_u64()); }
  [[nodiscard]] double normal() noexcept { return normal_quantile(uniform()); }

 private:
  Philox4x32 gen_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::uint64_t cache_ = 0;
  bool cached_ = false;
};

/// One standard normal addressed by a (seed, a, b) triple; no stream state.
double keyed_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace kssvar
