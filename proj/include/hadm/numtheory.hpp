#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hadm {

/// Prime power factor p^a of an integer.
struct PrimePower {
  std::uint64_t p = 0;
  unsigned a = 0;

  std::uint64_t value() const {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < a; ++i) v *= p;
    return v;
  }
  bool operator==(const PrimePower&) const = default;
};

/// Trial-division factorization, primes ascending. factorize(1) is empty.
inline std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    out.push_back({p, a});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (const auto& f : factorize(n)) ps.push_back(f.p);
  return ps;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> ds;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    ds.push_back(d);
    if (d != n / d) ds.push_back(n / d);
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (const auto& f : factorize(n)) r = r / f.p * (f.p - 1);
  return r;
}

/// Non-negative residue of v modulo m.
inline std::int64_t mod(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

/// Overflow-checked s^k; throws std::overflow_error past 2^64.
inline std::uint64_t checked_pow(std::uint64_t s, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(r, s, &r)) throw std::overflow_error("checked_pow overflow");
  }
  return r;
}

}  // namespace hadm
