#pragma once

// Decomposition of vanishing sums of s-th roots of unity into rotated prime
// cycles zeta^e (1 + w + ... + w^{p-1}), w = zeta^{s/p}.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "hadm/cyclo.hpp"
#include "hadm/matrix.hpp"
#include "hadm/numtheory.hpp"

namespace hadm {

/// sum_e mult[e] zeta_s^e with nonnegative multiplicities.
struct RootMultiset {
  std::uint64_t s = 1;
  std::vector<std::int64_t> mult;

  RootMultiset() = default;
  explicit RootMultiset(std::uint64_t order) : s(order), mult(order, 0) {}

  static RootMultiset from_exponents(std::uint64_t order, const std::vector<std::int64_t>& exps) {
    RootMultiset m(order);
    for (auto e : exps) ++m.mult[mod(e, std::int64_t(order))];
    return m;
  }

  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto v : mult) t += v;
    return t;
  }
  bool vanishes() const { return cyclo::vanishes(s, mult); }

  /// Multiply every term by zeta^c.
  RootMultiset rotated(std::int64_t c) const {
    RootMultiset out(s);
    for (std::uint64_t e = 0; e < s; ++e) out.mult[mod(std::int64_t(e) + c, std::int64_t(s))] = mult[e];
    return out;
  }
  bool operator==(const RootMultiset&) const = default;
};

struct Cycle {
  std::uint64_t p = 0;         // prime dividing s
  std::uint64_t rotation = 0;  // in [0, s/p)
  bool operator==(const Cycle&) const = default;
};

using CycleCertificate = std::vector<Cycle>;

/// Multiset of exponents e_ik - e_jk.
inline RootMultiset row_product_multiset(const ButsonMatrix& h, std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("row_product_multiset: i == j");
  if (i >= h.size() || j >= h.size()) throw std::out_of_range("row_product_multiset: row index");
  RootMultiset m(h.order());
  for (std::size_t k = 0; k < h.size(); ++k) ++m.mult[mod(h.exp(i, k) - h.exp(j, k), std::int64_t(h.order()))];
  return m;
}

/// Sum of the indicator vectors of the certificate's cycles.
inline RootMultiset reconstruct(std::uint64_t s, const CycleCertificate& cert) {
  RootMultiset m(s);
  for (const auto& c : cert) {
    if (c.p == 0 || s % c.p != 0 || c.rotation >= s / c.p) throw std::invalid_argument("reconstruct: bad cycle");
    for (std::uint64_t t = 0; t < c.p; ++t) ++m.mult[c.rotation + t * (s / c.p)];
  }
  return m;
}

namespace detail {

class CycleSearch {
 public:
  CycleSearch(std::uint64_t s, std::size_t memo_limit) : s_(s), primes_(prime_divisors(s)), memo_limit_(memo_limit) {}

  bool run(std::vector<std::int64_t>& m, CycleCertificate& cert) {
    std::uint64_t e = 0;
    while (e < s_ && m[e] == 0) ++e;
    if (e == s_) return true;
    if (failed_.count(m)) return false;
    for (auto p : primes_) {
      const std::uint64_t step = s_ / p;
      const std::uint64_t rot = e % step;
      bool fits = true;
      for (std::uint64_t t = 0; t < p && fits; ++t) fits = m[rot + t * step] > 0;
      if (!fits) continue;
      for (std::uint64_t t = 0; t < p; ++t) --m[rot + t * step];
      cert.push_back({p, rot});
      if (run(m, cert)) return true;
      cert.pop_back();
      for (std::uint64_t t = 0; t < p; ++t) ++m[rot + t * step];
    }
    if (failed_.size() < memo_limit_) failed_.insert(m);
    return false;
  }

 private:
  std::uint64_t s_;
  std::vector<std::uint64_t> primes_;
  std::size_t memo_limit_;
  std::set<std::vector<std::int64_t>> failed_;
};

}  // namespace detail

/// Backtracking search for a prime-cycle decomposition. The smallest
/// remaining exponent must lie in some cycle, so trying every prime there
/// makes the search exhaustive. Returns nullopt when none exists.
inline std::optional<CycleCertificate> decompose_cycles(const RootMultiset& m, std::size_t memo_limit = 1 << 16) {
  if (m.mult.size() != m.s) throw std::invalid_argument("decompose_cycles: multiplicity vector has wrong length");
  for (auto v : m.mult)
    if (v < 0) throw std::invalid_argument("decompose_cycles: negative multiplicity");
  if (!m.vanishes()) throw std::invalid_argument("decompose_cycles: sum does not vanish");
  auto work = m.mult;
  CycleCertificate cert;
  detail::CycleSearch search(m.s, memo_limit);
  if (search.run(work, cert)) return cert;
  return std::nullopt;
}

struct PairCertificate {
  std::size_t i = 0, j = 0;
  std::optional<CycleCertificate> certificate;
};

struct RegularityReport {
  bool regular = true;
  std::vector<PairCertificate> pairs;  // i < j, row-major
};

inline RegularityReport is_regular(const ButsonMatrix& h) {
  require_hadamard(h);
  RegularityReport rep;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j) {
      auto c = decompose_cycles(row_product_multiset(h, i, j));
      if (!c) rep.regular = false;
      rep.pairs.push_back({i, j, std::move(c)});
    }
  return rep;
}

}  // namespace hadm
