#pragma once

#include <cstdint>

namespace salmon::modp {

inline constexpr std::uint64_t kMersenne31 = (std::uint64_t{1} << 31) - 1;
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return (s >= p || s < a) ? s - p : s;
}

inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t neg(std::uint64_t a, std::uint64_t p) { return a == 0 ? 0 : p - a; }

/// a, b must already lie in [0, p).
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  if (p == kMersenne31) {
    std::uint64_t x = a * b;
    x = (x & kMersenne31) + (x >> 31);
    x = (x & kMersenne31) + (x >> 31);
    return x >= kMersenne31 ? x - kMersenne31 : x;
  }
  if (p == kMersenne61) {
    unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = (static_cast<std::uint64_t>(x) & kMersenne61) + static_cast<std::uint64_t>(x >> 61);
    return r >= kMersenne61 ? r - kMersenne61 : r;
  }
  if (p <= 0xffffffffULL) return a * b % p;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t pow(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  base %= p;
  while (e) {
    if (e & 1) r = mul(r, base, p);
    base = mul(base, base, p);
    e >>= 1;
  }
  return r;
}

/// Inverse by Fermat; p must be prime and a != 0 mod p.
inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) { return pow(a, p - 2, p); }

/// Reduce a signed 64-bit integer into [0, p).
inline std::uint64_t from_signed(std::int64_t v, std::uint64_t p) {
  if (v >= 0) return static_cast<std::uint64_t>(v) % p;
  std::uint64_t m = static_cast<std::uint64_t>(-(v + 1)) + 1;  // |v| without overflow
  return neg(m % p, p);
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(std::uint64_t n);

}  // namespace salmon::modp
