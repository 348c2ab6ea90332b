#include "balcut/rng.hpp"

#include <cmath>

#include "balcut/common.hpp"

namespace balcut {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Counter domains (counter word 3 high byte). Sequential draws, addressed
// draws, and substream derivation must never share a counter.
constexpr std::uint32_t kDomainSeq = 0x00000000u;
constexpr std::uint32_t kDomainAt = 0x01000000u;
constexpr std::uint32_t kDomainChild = 0x02000000u;

inline void round_once(std::array<std::uint32_t, 4>& x, std::uint32_t k0,
                       std::uint32_t k1) {
  std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
  std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
  std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

inline double u64_to_unit(std::uint64_t x) {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> Rng::philox4x32_10(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> x = counter;
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int r = 0; r < 10; ++r) {
    round_once(x, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return x;
}

Rng::Rng(std::uint64_t seed)
    : key0_(static_cast<std::uint32_t>(seed)),
      key1_(static_cast<std::uint32_t>(seed >> 32)) {}

Rng::Rng(std::uint32_t k0, std::uint32_t k1) : key0_(k0), key1_(k1) {}

std::array<std::uint32_t, 4> Rng::block(std::uint64_t pos,
                                        std::uint32_t domain) const {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos >> 32),
      0u, domain};
  return philox4x32_10(ctr, {key0_, key1_});
}

Rng Rng::substream(std::uint64_t tag) const {
  auto out = block(tag, kDomainChild);
  return Rng(out[0], out[1]);
}

std::uint64_t Rng::next_u64() {
  if (have_buf_) {
    have_buf_ = false;
    return buf_;
  }
  auto out = block(pos_++, kDomainSeq);
  buf_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  have_buf_ = true;
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double Rng::next_double() { return u64_to_unit(next_u64()); }

double Rng::next_gaussian() {
  double u1 = u64_to_unit(next_u64());
  double u2 = u64_to_unit(next_u64());
  // u1 shifted into (0, 1] so the log is finite.
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * M_PI * u2);
}

double Rng::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

std::uint64_t Rng::next_below(std::uint64_t n) {
  BALCUT_ASSERT(n > 0, "next_below(0)");
  std::uint64_t bound = n * ((~0ull) / n);  // 0 means no rejection needed
  std::uint64_t x;
  do {
    x = next_u64();
  } while (bound != 0 && x >= bound);
  return x % n;
}

bool Rng::next_bernoulli(double p) { return next_double() < p; }

std::uint64_t Rng::u64_at(std::uint64_t idx) const {
  auto out = block(idx, kDomainAt);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double Rng::double_at(std::uint64_t idx) const { return u64_to_unit(u64_at(idx)); }

double Rng::gaussian_at(std::uint64_t idx) const {
  auto out = block(idx, kDomainAt);
  std::uint64_t a = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  std::uint64_t b = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  double u1 = u64_to_unit(a);
  double u2 = u64_to_unit(b);
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * M_PI * u2);
}

bool Rng::bernoulli_at(std::uint64_t idx, double p) const {
  return double_at(idx) < p;
}

}  // namespace balcut
