#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace balcut {

// Counter-based PRNG (Philox4x32-10).
//
// A stream is identified by a 64-bit key. Draws are addressed by a 128-bit
// counter, so any draw can be regenerated independently of order; sequential
// and addressed draws live in disjoint counter domains. Substreams derive a
// fresh key by running the generator over the parent key in a third, reserved
// domain, so child streams never collide with draws of the parent. All
// randomness in the library flows through this type: identical seeds give
// identical results, bit for bit, regardless of evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent child stream labelled by `tag`.
  Rng substream(std::uint64_t tag) const;

  // Sequential draws (advance internal position).
  std::uint64_t next_u64();
  double next_double();                       // [0, 1)
  double next_gaussian();                     // N(0, 1)
  double next_uniform(double lo, double hi);  // [lo, hi)
  std::uint64_t next_below(std::uint64_t n);  // unbiased, [0, n)
  bool next_bernoulli(double p);

  // Addressed draws (independent of sequential position).
  std::uint64_t u64_at(std::uint64_t idx) const;
  double double_at(std::uint64_t idx) const;
  double gaussian_at(std::uint64_t idx) const;
  bool bernoulli_at(std::uint64_t idx, double p) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox4x32_10(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key);

 private:
  Rng(std::uint32_t k0, std::uint32_t k1);
  std::array<std::uint32_t, 4> block(std::uint64_t pos, std::uint32_t domain) const;

  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint64_t pos_ = 0;  // sequential counter
  std::uint64_t buf_ = 0;  // second u64 of the last block
  bool have_buf_ = false;
};

}  // namespace balcut
