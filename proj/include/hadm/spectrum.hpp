#pragma once

// Statistics of the number of 1 entries under random row/column phases.
//
// For a Butson matrix H with exponents e_ij and phases a, b in Z_s^N,
//   phi(a, b) = #{(i, j) : a_i + b_j + e_ij = 0 mod s},
// and mu is the law of phi for uniform (a, b).

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadm/defect.hpp"
#include "hadm/matrix.hpp"
#include "hadm/numtheory.hpp"
#include "hadm/parallel.hpp"

namespace hadm {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultCap = 100'000'000;

/// Finitely supported signed measure on Z with exact rational weights.
/// Zero weights are never stored.
class SignedMeasure {
 public:
  SignedMeasure() = default;

  static SignedMeasure delta(std::int64_t k, mpq_class w = 1) {
    SignedMeasure m;
    m.add(k, w);
    return m;
  }

  void add(std::int64_t k, const mpq_class& w) {
    if (w == 0) return;
    auto& v = atoms_[k];
    v += w;
    v.canonicalize();
    if (v == 0) atoms_.erase(k);
  }

  const std::map<std::int64_t, mpq_class>& atoms() const { return atoms_; }
  mpq_class weight(std::int64_t k) const {
    auto it = atoms_.find(k);
    return it == atoms_.end() ? mpq_class(0) : it->second;
  }
  std::vector<std::int64_t> support() const {
    std::vector<std::int64_t> s;
    for (const auto& [k, w] : atoms_) s.push_back(k);
    return s;
  }
  mpq_class total_mass() const {
    mpq_class t = 0;
    for (const auto& [k, w] : atoms_) t += w;
    return t;
  }
  mpq_class mean() const {
    mpq_class t = 0;
    for (const auto& [k, w] : atoms_) t += w * k;
    return t;
  }
  bool is_probability() const {
    for (const auto& [k, w] : atoms_)
      if (w < 0) return false;
    return total_mass() == 1;
  }

  SignedMeasure& operator+=(const SignedMeasure& o) {
    for (const auto& [k, w] : o.atoms_) add(k, w);
    return *this;
  }
  SignedMeasure scaled(const mpq_class& c) const {
    SignedMeasure m;
    if (c == 0) return m;
    for (const auto& [k, w] : atoms_) m.atoms_[k] = w * c;
    return m;
  }
  bool operator==(const SignedMeasure& o) const { return atoms_ == o.atoms_; }

 private:
  std::map<std::int64_t, mpq_class> atoms_;
};

inline SignedMeasure convolve(const SignedMeasure& x, const SignedMeasure& y) {
  SignedMeasure out;
  for (const auto& [k1, w1] : x.atoms())
    for (const auto& [k2, w2] : y.atoms()) out.add(k1 + k2, w1 * w2);
  return out;
}

/// x^{*k}, with x^{*0} = delta_0.
inline SignedMeasure convolution_power(const SignedMeasure& x, unsigned k) {
  SignedMeasure out = SignedMeasure::delta(0);
  for (unsigned t = 0; t < k; ++t) out = convolve(out, x);
  return out;
}

inline SignedMeasure linear_combo(const std::vector<std::pair<mpq_class, SignedMeasure>>& terms) {
  SignedMeasure out;
  for (const auto& [c, m] : terms) out += m.scaled(c);
  return out;
}

struct PhaseAssignment {
  std::uint64_t s = 1;
  std::vector<std::int64_t> a, b;
  bool operator==(const PhaseAssignment&) const = default;
};

/// H rewritten over s-th roots; s must be a multiple of the minimal order.
inline ButsonMatrix butson_at(const ButsonMatrix& h, std::uint64_t s) {
  if (s == 0) throw std::invalid_argument("order s must be >= 1");
  const ButsonMatrix m = at_minimal_order(h);
  if (s % m.order() != 0)
    throw std::invalid_argument("order mismatch: minimal order " + std::to_string(m.order()) + " does not divide " +
                                std::to_string(s));
  return m.at_order(s);
}

inline std::size_t phase_count(const ButsonMatrix& h, const PhaseAssignment& p) {
  const std::size_t n = h.size();
  if (p.a.size() != n || p.b.size() != n) throw std::invalid_argument("phase_count: assignment length");
  const ButsonMatrix m = butson_at(h, p.s);
  const auto s = std::int64_t(p.s);
  for (auto v : p.a)
    if (v < 0 || v >= s) throw std::invalid_argument("phase_count: phase outside [0, s)");
  for (auto v : p.b)
    if (v < 0 || v >= s) throw std::invalid_argument("phase_count: phase outside [0, s)");
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((p.a[i] + p.b[j] + m.exp(i, j)) % s == 0) ++c;
  return c;
}

struct EnumOptions {
  std::uint64_t cap = kDefaultCap;
  unsigned threads = 0;  // 0: resolve_threads()
};

namespace detail {

/// s^e, or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> try_pow(std::uint64_t s, std::uint64_t e) {
  std::uint64_t v = 1;
  for (std::uint64_t t = 0; t < e; ++t) {
    if (s != 0 && v > std::numeric_limits<std::uint64_t>::max() / s) return std::nullopt;
    v *= s;
  }
  return v;
}

/// Decode a task index into a_1.. (a_0 = 0), a_1 most significant.
inline void decode_phases(std::uint64_t idx, std::uint64_t s, std::vector<std::int64_t>& a) {
  for (std::size_t i = a.size(); i-- > 1;) {
    a[i] = std::int64_t(idx % s);
    idx /= s;
  }
  a[0] = 0;
}

/// Column histograms c_j[x] = #{i : a_i + e_ij = x mod s}, stored c[j*s + x].
inline void column_histograms(const ButsonMatrix& m, const std::vector<std::int64_t>& a,
                              std::vector<std::uint32_t>& c) {
  const std::size_t n = m.size();
  const auto s = m.order();
  std::fill(c.begin(), c.end(), 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ++c[j * s + std::uint64_t(a[i] + m.exp(i, j)) % s];
}

}  // namespace detail

/// Exact law of phi. Enumerates a with a_0 = 0 (phi(a + c, b - c) = phi(a, b));
/// for fixed a, phi is a sum of independent per-column terms c_j[-b_j], so the
/// distribution over b is the convolution of the column histograms.
/// Requires s^{2N-1} <= cap.
inline SignedMeasure mu_exact(const ButsonMatrix& h, std::uint64_t s, const EnumOptions& opt = {}) {
  const ButsonMatrix m = butson_at(h, s);
  const std::size_t n = m.size();
  const auto states = detail::try_pow(s, 2 * n - 1);
  if (!states || *states > opt.cap)
    throw CapExceeded("mu_exact: s^(2N-1) states exceed the enumeration cap; raise the cap or use mu_sampled");
  const std::uint64_t outer = *detail::try_pow(s, n - 1);
  // Split the a-enumeration into chunks over its leading coordinate(s).
  const std::uint64_t chunks = std::min<std::uint64_t>(outer, n > 2 ? s * s : s);
  const std::uint64_t per_chunk = outer / chunks;
  std::vector<std::vector<std::uint64_t>> partial(chunks);

  parallel_for(chunks, resolve_threads(opt.threads), [&](std::size_t chunk) {
    std::vector<std::uint64_t> total(n * n + 1, 0);
    std::vector<std::int64_t> a(n);
    std::vector<std::uint32_t> c(n * s);
    std::vector<std::uint64_t> dist, next;
    for (std::uint64_t idx = chunk * per_chunk; idx < (chunk + 1) * per_chunk; ++idx) {
      detail::decode_phases(idx, s, a);
      detail::column_histograms(m, a, c);
      dist.assign(1, 1);
      for (std::size_t j = 0; j < n; ++j) {
        next.assign(dist.size() + n, 0);
        const std::uint32_t* col = &c[j * s];
        for (std::size_t k = 0; k < dist.size(); ++k) {
          if (!dist[k]) continue;
          for (std::uint64_t x = 0; x < s; ++x) next[k + col[x]] += dist[k];
        }
        while (!next.empty() && next.back() == 0) next.pop_back();
        dist.swap(next);
      }
      for (std::size_t k = 0; k < dist.size(); ++k) total[k] += dist[k];
    }
    partial[chunk] = std::move(total);
  });

  std::vector<std::uint64_t> total(n * n + 1, 0);
  for (const auto& p : partial)
    for (std::size_t k = 0; k < p.size(); ++k) total[k] += p[k];
  const mpz_class denom(std::to_string(*states));
  SignedMeasure mu;
  for (std::size_t k = 0; k < total.size(); ++k)
    if (total[k]) mu.add(std::int64_t(k), mpq_class(mpz_class(std::to_string(total[k])), denom));
  return mu;
}

inline std::vector<std::int64_t> support(const ButsonMatrix& h, std::uint64_t s, const EnumOptions& opt = {}) {
  return mu_exact(h, s, opt).support();
}

/// Samples per independent random stream in mu_sampled.
inline constexpr std::uint64_t kSampleBlock = 4096;

/// Empirical law of phi from `samples` uniform draws. Samples are grouped in
/// blocks of kSampleBlock; block b draws from std::mt19937_64 seeded with
/// seed_seq{seed, b}, so the result depends only on (seed, samples).
inline SignedMeasure mu_sampled(const ButsonMatrix& h, std::uint64_t s, std::uint64_t samples, std::uint64_t seed,
                                unsigned threads = 0) {
  if (samples == 0) throw std::invalid_argument("mu_sampled: samples must be >= 1");
  const ButsonMatrix m = butson_at(h, s);
  const std::size_t n = m.size();
  const std::uint64_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<std::vector<std::uint64_t>> partial(blocks);
  parallel_for(blocks, resolve_threads(threads), [&](std::size_t blk) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(blk), std::uint32_t(blk >> 32)};
    std::mt19937_64 rng(seq);
    // Rejection sampling keeps draws uniform and independent of the std library.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % s;
    auto draw = [&] {
      std::uint64_t v;
      do v = rng();
      while (v >= limit);
      return std::int64_t(v % s);
    };
    std::vector<std::uint64_t> hist(n * n + 1, 0);
    std::vector<std::int64_t> a(n), b(n);
    const std::uint64_t count = std::min(kSampleBlock, samples - blk * kSampleBlock);
    for (std::uint64_t t = 0; t < count; ++t) {
      for (auto& v : a) v = draw();
      for (auto& v : b) v = draw();
      std::size_t c = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if ((a[i] + b[j] + m.exp(i, j)) % std::int64_t(s) == 0) ++c;
      ++hist[c];
    }
    partial[blk] = std::move(hist);
  });
  std::vector<std::uint64_t> total(n * n + 1, 0);
  for (const auto& p : partial)
    for (std::size_t k = 0; k < p.size(); ++k) total[k] += p[k];
  SignedMeasure mu;
  const mpz_class denom(std::to_string(samples));
  for (std::size_t k = 0; k < total.size(); ++k)
    if (total[k]) mu.add(std::int64_t(k), mpq_class(mpz_class(std::to_string(total[k])), denom));
  return mu;
}

/// Total-variation distance sup_A |x(A) - y(A)| = (1/2) sum |x_k - y_k|.
inline mpq_class total_variation(const SignedMeasure& x, const SignedMeasure& y) {
  SignedMeasure d = x;
  d += y.scaled(-1);
  mpq_class t = 0;
  for (const auto& [k, w] : d.atoms()) t += abs(w);
  return t / 2;
}

// --------------------------------------------------------- Gale-Berlekamp

enum class GBMode { max, min };

struct GBOptions {
  std::uint64_t cap = kDefaultCap;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  unsigned restarts = 100;
};

struct GBResult {
  std::size_t value = 0;
  PhaseAssignment witness;
  // false when the cap forced the local-search fallback: then value is a
  // lower bound (max mode) or an upper bound (min mode).
  bool exact = true;
};

namespace detail {

inline GBResult gb_local_search(const ButsonMatrix& m, GBMode mode, const GBOptions& opt) {
  const std::size_t n = m.size();
  const auto s = std::int64_t(m.order());
  const int sign = mode == GBMode::max ? 1 : -1;
  std::mt19937_64 rng(opt.seed);
  GBResult best;
  best.exact = false;
  bool have = false;
  auto count = [&](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((a[i] + b[j] + m.exp(i, j)) % s == 0) ++c;
    return c;
  };
  for (unsigned r = 0; r < std::max(1u, opt.restarts); ++r) {
    std::vector<std::int64_t> a(n), b(n);
    for (auto& v : a) v = std::int64_t(rng() % std::uint64_t(s));
    for (auto& v : b) v = std::int64_t(rng() % std::uint64_t(s));
    std::size_t cur = count(a, b);
    while (true) {
      // Best single-coordinate move; row i at phase v scores #{j : v + b_j + e_ij = 0}.
      long best_gain = 0;
      int kind = -1;
      std::size_t where = 0;
      std::int64_t to = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<long> hits(s, 0);
        for (std::size_t j = 0; j < n; ++j) ++hits[mod(-(b[j] + m.exp(i, j)), s)];
        for (std::int64_t v = 0; v < s; ++v) {
          const long gain = sign * (hits[v] - hits[a[i]]);
          if (gain > best_gain) best_gain = gain, kind = 0, where = i, to = v;
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<long> hits(s, 0);
        for (std::size_t i = 0; i < n; ++i) ++hits[mod(-(a[i] + m.exp(i, j)), s)];
        for (std::int64_t v = 0; v < s; ++v) {
          const long gain = sign * (hits[v] - hits[b[j]]);
          if (gain > best_gain) best_gain = gain, kind = 1, where = j, to = v;
        }
      }
      if (kind < 0) break;
      (kind == 0 ? a : b)[where] = to;
      cur = std::size_t(long(cur) + sign * best_gain);
    }
    if (!have || (mode == GBMode::max ? cur > best.value : cur < best.value)) {
      have = true;
      best.value = cur;
      best.witness = {std::uint64_t(s), a, b};
    }
  }
  return best;
}

}  // namespace detail

/// Extremal number of 1 entries over row/column phase switches. Exact
/// enumeration over a (a_0 = 0) picks each column phase from that column's
/// histogram. Needs s^{N-1} N (N + s) <= cap, else falls back to local search.
inline GBResult gale_berlekamp(const ButsonMatrix& h, std::uint64_t s, GBMode mode, const GBOptions& opt = {}) {
  const ButsonMatrix m = butson_at(h, s);
  const std::size_t n = m.size();
  const auto outer = detail::try_pow(s, n - 1);
  const bool fits = outer && *outer <= opt.cap / (n * (n + s));
  if (!fits) return detail::gb_local_search(m, mode, opt);

  const std::uint64_t chunks = std::min<std::uint64_t>(*outer, n > 2 ? s * s : s);
  const std::uint64_t per_chunk = *outer / chunks;
  std::vector<GBResult> partial(chunks);
  const bool want_max = mode == GBMode::max;
  parallel_for(chunks, resolve_threads(opt.threads), [&](std::size_t chunk) {
    std::vector<std::int64_t> a(n);
    std::vector<std::uint32_t> c(n * s);
    GBResult best;
    bool have = false;
    for (std::uint64_t idx = chunk * per_chunk; idx < (chunk + 1) * per_chunk; ++idx) {
      detail::decode_phases(idx, s, a);
      detail::column_histograms(m, a, c);
      std::size_t value = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t* col = &c[j * s];
        value += want_max ? *std::max_element(col, col + s) : *std::min_element(col, col + s);
      }
      if (!have || (want_max ? value > best.value : value < best.value)) {
        have = true;
        best.value = value;
        best.witness.s = s;
        best.witness.a = a;
        best.witness.b.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
          const std::uint32_t* col = &c[j * s];
          const auto x = (want_max ? std::max_element(col, col + s) : std::min_element(col, col + s)) - col;
          best.witness.b[j] = mod(-std::int64_t(x), std::int64_t(s));
        }
      }
    }
    partial[chunk] = std::move(best);
  });
  GBResult best = partial.front();
  for (const auto& p : partial)
    if (want_max ? p.value > best.value : p.value < best.value) best = p;
  return best;
}

// ------------------------------------------------------- conjecture checks

struct ConjectureReport {
  std::size_t n = 0;
  std::uint64_t s_min = 1;
  std::size_t defect = 0;                    // numeric
  std::optional<std::size_t> defect_rational;
  std::size_t count_ones = 0;
  std::optional<GBResult> gb_min, gb_max;    // absent if over the cap
  std::optional<std::vector<std::int64_t>> support;
  std::optional<bool> sandwich;              // gb_min <= d <= gb_max
  std::optional<bool> in_support_hull;       // min supp <= d <= max supp
  bool ones_formula = false;                 // d == count_ones
  std::vector<std::string> skipped;          // checks not run because of the cap
};

inline ConjectureReport conjecture_report(const ButsonMatrix& h, const EnumOptions& opt = {}, double tol = 1e-9,
                                          std::uint64_t rational_max_n = 12) {
  ConjectureReport r;
  const ButsonMatrix m = at_minimal_order(h);
  r.n = m.size();
  r.s_min = m.order();
  r.defect = defect_numeric(m, tol).dimension;
  if (r.n <= rational_max_n) r.defect_rational = defect_rational(m).dimension;
  r.count_ones = count_ones(m);
  r.ones_formula = r.defect == r.count_ones;

  GBOptions g;
  g.cap = opt.cap;
  g.threads = opt.threads;
  const GBResult lo = gale_berlekamp(m, r.s_min, GBMode::min, g);
  const GBResult hi = gale_berlekamp(m, r.s_min, GBMode::max, g);
  if (lo.exact && hi.exact) {
    r.gb_min = lo;
    r.gb_max = hi;
    r.sandwich = lo.value <= r.defect && r.defect <= hi.value;
  } else {
    r.skipped.push_back("gale-berlekamp");
  }
  try {
    r.support = support(m, r.s_min, opt);
    const auto d = std::int64_t(r.defect);
    r.in_support_hull = !r.support->empty() && r.support->front() <= d && d <= r.support->back();
  } catch (const CapExceeded&) {
    r.skipped.push_back("support");
  }
  return r;
}

}  // namespace hadm
