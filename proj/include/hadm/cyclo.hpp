#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_s).
//
// Elements are stored in the power basis 1, z, ..., z^(phi(s)-1) modulo the
// s-th cyclotomic polynomial, so equality is coefficient equality and
// vanishing of a root-of-unity sum is decided exactly.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "hadm/numtheory.hpp"

namespace hadm::cyclo {

/// Integer polynomial, coefficients from degree 0 upwards.
using IntPoly = std::vector<mpz_class>;

namespace detail {

inline void trim(IntPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline IntPoly multiply(const IntPoly& a, const IntPoly& b) {
  IntPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

// Exact division by a monic polynomial; throws if the remainder is nonzero.
inline IntPoly divide_exact(IntPoly num, const IntPoly& den) {
  const std::size_t dn = den.size() - 1;
  if (den.back() != 1) throw std::logic_error("divide_exact: divisor not monic");
  if (num.size() < den.size()) throw std::logic_error("divide_exact: degree too small");
  IntPoly q(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    const mpz_class c = num[k];
    q[k - dn] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dn; ++i) num[k - dn + i] -= c * den[i];
  }
  for (std::size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw std::logic_error("divide_exact: nonzero remainder");
  return q;
}

}  // namespace detail

/// The s-th cyclotomic polynomial, computed as (x^s - 1) / prod_{d | s, d < s} Phi_d.
inline IntPoly cyclotomic_poly(std::uint64_t s) {
  if (s == 0) throw std::invalid_argument("cyclotomic_poly: s must be >= 1");
  static std::mutex mu;
  static std::map<std::uint64_t, IntPoly> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(s); it != cache.end()) return it->second;
  }
  IntPoly num(s + 1, 0);
  num[0] = -1;
  num[s] = 1;
  IntPoly den{1};
  for (auto d : divisors(s))
    if (d < s) den = detail::multiply(den, cyclotomic_poly(d));
  IntPoly phi = detail::divide_exact(std::move(num), den);
  std::lock_guard lock(mu);
  cache.emplace(s, phi);
  return phi;
}

/// Reduction tables for Q(zeta_s): power(e) is z^e mod Phi_s for e in [0, s).
class Field {
 public:
  static const Field& of(std::uint64_t s) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<Field>> fields;
    std::lock_guard lock(mu);
    auto& slot = fields[s];
    if (!slot) slot.reset(new Field(s));
    return *slot;
  }

  std::uint64_t order() const { return s_; }
  std::size_t degree() const { return phi_; }
  const IntPoly& modulus() const { return modulus_; }
  const std::vector<std::int64_t>& power(std::uint64_t e) const { return powers_[e % s_]; }

 private:
  explicit Field(std::uint64_t s) : s_(s), modulus_(cyclotomic_poly(s)) {
    phi_ = modulus_.size() - 1;
    if (phi_ == 0) throw std::logic_error("Field: degenerate modulus");
    powers_.reserve(s_);
    std::vector<mpz_class> cur(phi_, 0);
    cur[0] = 1;
    for (std::uint64_t e = 0; e < s_; ++e) {
      std::vector<std::int64_t> row(phi_);
      for (std::size_t i = 0; i < phi_; ++i) {
        if (!cur[i].fits_slong_p()) throw std::overflow_error("Field: table entry overflow");
        row[i] = cur[i].get_si();
      }
      powers_.push_back(std::move(row));
      // multiply by z and fold z^phi using the monic modulus
      mpz_class top = cur[phi_ - 1];
      for (std::size_t i = phi_ - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top != 0)
        for (std::size_t i = 0; i < phi_; ++i) cur[i] -= top * modulus_[i];
    }
  }

  std::uint64_t s_;
  std::size_t phi_ = 0;
  IntPoly modulus_;
  std::vector<std::vector<std::int64_t>> powers_;
};

/// Element of Q(zeta_s) in canonical power-basis form.
class CycloNumber {
 public:
  explicit CycloNumber(std::uint64_t s) : s_(s), c_(Field::of(s).degree(), 0) {}

  static CycloNumber zero(std::uint64_t s) { return CycloNumber(s); }
  static CycloNumber rational(std::uint64_t s, const mpq_class& q) {
    CycloNumber x(s);
    x.c_[0] = q;
    return x;
  }
  static CycloNumber root_power(std::uint64_t s, std::int64_t e) {
    CycloNumber x(s);
    const auto& row = Field::of(s).power(static_cast<std::uint64_t>(mod(e, static_cast<std::int64_t>(s))));
    for (std::size_t i = 0; i < row.size(); ++i) x.c_[i] = row[i];
    return x;
  }

  /// Sum of bucket[e] * z^e over e in [0, s).
  static CycloNumber from_exponent_weights(std::uint64_t s, std::span<const mpq_class> bucket) {
    const Field& f = Field::of(s);
    CycloNumber x(s);
    for (std::size_t e = 0; e < bucket.size(); ++e) {
      if (bucket[e] == 0) continue;
      const auto& row = f.power(e);
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) x.c_[i] += bucket[e] * row[i];
    }
    return x;
  }

  std::uint64_t order() const { return s_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& v : c_)
      if (v != 0) return false;
    return true;
  }

  CycloNumber operator-() const {
    CycloNumber x = *this;
    for (auto& v : x.c_) v = -v;
    return x;
  }
  CycloNumber& operator+=(const CycloNumber& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  CycloNumber& operator-=(const CycloNumber& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  CycloNumber operator*(const CycloNumber& o) const {
    check_same(o);
    std::vector<mpq_class> prod(s_, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) prod[(i + j) % s_] += c_[i] * o.c_[j];
    }
    return from_exponent_weights(s_, prod);
  }
  CycloNumber& operator*=(const CycloNumber& o) { return *this = *this * o; }
  friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
  friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }
  friend bool operator==(const CycloNumber& a, const CycloNumber& b) {
    a.check_same(b);
    return a.c_ == b.c_;
  }

  /// Complex conjugate: z^k -> z^(s-k).
  CycloNumber conj() const {
    std::vector<mpq_class> bucket(s_, 0);
    for (std::size_t k = 0; k < c_.size(); ++k) bucket[(s_ - k) % s_] = c_[k];
    return from_exponent_weights(s_, bucket);
  }

  /// Embeds into Q(zeta_t) for s | t via zeta_s = zeta_t^(t/s).
  CycloNumber lift(std::uint64_t t) const {
    if (t % s_ != 0) throw std::invalid_argument("CycloNumber::lift: target order not a multiple");
    const std::uint64_t m = t / s_;
    std::vector<mpq_class> bucket(t, 0);
    for (std::size_t k = 0; k < c_.size(); ++k) bucket[(k * m) % t] += c_[k];
    return from_exponent_weights(t, bucket);
  }

  std::complex<double> to_complex() const {
    std::complex<double> z = 0;
    for (std::size_t k = 0; k < c_.size(); ++k)
      z += c_[k].get_d() * std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(s_));
    return z;
  }

 private:
  void check_same(const CycloNumber& o) const {
    if (o.s_ != s_) throw std::invalid_argument("CycloNumber: mixed root orders, lift to the lcm first");
  }

  std::uint64_t s_;
  std::vector<mpq_class> c_;
};

/// Power-basis coordinates of sum_e counts[e] z^e with integer weights.
/// Accumulates in 128 bits; throws std::overflow_error if a coordinate leaves int64.
inline std::vector<std::int64_t> reduce_counts(std::uint64_t s, std::span<const std::int64_t> counts) {
  const Field& f = Field::of(s);
  std::vector<__int128> acc(f.degree(), 0);
  for (std::size_t e = 0; e < counts.size(); ++e) {
    if (counts[e] == 0) continue;
    const auto& row = f.power(e);
    for (std::size_t i = 0; i < row.size(); ++i) acc[i] += static_cast<__int128>(counts[e]) * row[i];
  }
  std::vector<std::int64_t> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i] > INT64_MAX || acc[i] < INT64_MIN) throw std::overflow_error("reduce_counts overflow");
    out[i] = static_cast<std::int64_t>(acc[i]);
  }
  return out;
}

/// True iff sum_e counts[e] z_s^e == 0 exactly.
inline bool vanishes(std::uint64_t s, std::span<const std::int64_t> counts) {
  for (auto v : reduce_counts(s, counts))
    if (v != 0) return false;
  return true;
}

/// One term z^exponent * coeff * x_unknown of a linear equation with real unknowns.
struct Term {
  std::int64_t exponent = 0;
  std::size_t unknown = 0;
  mpq_class coeff = 1;
};

/// Writes sum z^e * coeff * x_u = 0 (x real) as phi(s) rational rows over
/// `num_unknowns` unknowns: one row per power-basis coordinate.
/// For rational x the complex equation holds iff every row vanishes.
inline std::vector<std::vector<mpq_class>> expand_equation(std::span<const Term> terms, std::uint64_t s,
                                                           std::size_t num_unknowns) {
  const Field& f = Field::of(s);
  std::vector<std::vector<mpq_class>> rows(f.degree(), std::vector<mpq_class>(num_unknowns, 0));
  for (const auto& t : terms) {
    if (t.unknown >= num_unknowns) throw std::out_of_range("expand_equation: unknown index");
    const auto& pw = f.power(static_cast<std::uint64_t>(mod(t.exponent, static_cast<std::int64_t>(s))));
    for (std::size_t r = 0; r < pw.size(); ++r)
      if (pw[r] != 0) rows[r][t.unknown] += t.coeff * pw[r];
  }
  return rows;
}

}  // namespace hadm::cyclo
