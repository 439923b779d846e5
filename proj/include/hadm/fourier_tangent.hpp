#pragma once

// Explicit basis of the enveloping tangent space at the Fourier matrix F_N.
//
// Z_N is handled through its CRT decomposition prod Z_{p_t^{a_t}}. A subgroup
// is given by exponents r_t <= a_t. For a pair of subgroups (G, H) with
// r_t + s_t <= a_t at every prime, the free coordinates are G° x H°, where
// G° keeps the coordinates of full order in Z_{p^r} (the singleton {0} when
// r = 0). Index i of Z_N maps into G by phi_G(i)_t = i mod p_t^{r_t}.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadm/defect.hpp"
#include "hadm/linalg.hpp"
#include "hadm/matrix.hpp"
#include "hadm/numtheory.hpp"
#include "hadm/tangent.hpp"

namespace hadm {

struct SubgroupDescriptor {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // factorization of n
  std::vector<unsigned> r;          // r[t] <= factors[t].a

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (std::size_t t = 0; t < r.size(); ++t) o *= ipow(factors[t].p, r[t]);
    return o;
  }
  /// Cyclic factor orders p_t^{r_t}.
  std::vector<std::uint64_t> moduli() const {
    std::vector<std::uint64_t> m;
    for (std::size_t t = 0; t < r.size(); ++t) m.push_back(ipow(factors[t].p, r[t]));
    return m;
  }
  bool operator==(const SubgroupDescriptor& o) const { return n == o.n && r == o.r; }
  bool operator<(const SubgroupDescriptor& o) const { return r < o.r; }

  static std::uint64_t ipow(std::uint64_t p, unsigned e) {
    std::uint64_t v = 1;
    while (e--) v *= p;
    return v;
  }
};

using GroupElement = std::vector<std::uint64_t>;

/// All subgroups of Z_N, lexicographic in (r_1, ..., r_k).
inline std::vector<SubgroupDescriptor> subgroups(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("subgroups: N must be >= 1");
  const auto f = factorize(n);
  std::vector<SubgroupDescriptor> out;
  std::vector<unsigned> r(f.size(), 0);
  while (true) {
    out.push_back({n, f, r});
    std::size_t t = r.size();
    while (t > 0) {
      --t;
      if (r[t] < f[t].a) {
        ++r[t];
        break;
      }
      r[t] = 0;
      if (t == 0) return out;
    }
    if (r.empty()) return out;
  }
}

/// True if G x H carries free variables: r_t + s_t <= a_t at every prime.
inline bool admissible_pair(const SubgroupDescriptor& g, const SubgroupDescriptor& h) {
  if (g.n != h.n) throw std::invalid_argument("admissible_pair: different N");
  for (std::size_t t = 0; t < g.r.size(); ++t)
    if (g.r[t] + h.r[t] > g.factors[t].a) return false;
  return true;
}

/// G°, in lexicographic order of coordinates. A coordinate with r > 0 ranges
/// over the representatives p^(r-1) .. p^r - 1, i.e. Z_{p^r} minus the
/// residues 0 .. p^(r-1) - 1 of the next level down. The unit residues have
/// the same count but give dependent indicators once r >= 2 (at N = 4,
/// [j = 1] + [j = 3] = [j odd]).
inline std::vector<GroupElement> dephased_indices(const SubgroupDescriptor& g) {
  std::vector<std::vector<std::uint64_t>> choices;
  for (std::size_t t = 0; t < g.r.size(); ++t) {
    std::vector<std::uint64_t> c;
    if (g.r[t] == 0)
      c.push_back(0);
    else
      for (std::uint64_t x = SubgroupDescriptor::ipow(g.factors[t].p, g.r[t] - 1);
           x < SubgroupDescriptor::ipow(g.factors[t].p, g.r[t]); ++x)
        c.push_back(x);
    choices.push_back(std::move(c));
  }
  std::vector<GroupElement> out{GroupElement{}};
  for (const auto& c : choices) {
    std::vector<GroupElement> next;
    for (const auto& prefix : out)
      for (auto x : c) {
        auto e = prefix;
        e.push_back(x);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

/// Residues of i modulo each p_t^{a_t}.
inline GroupElement crt_decompose(const std::vector<PrimePower>& f, std::uint64_t i) {
  GroupElement out;
  for (const auto& pp : f) out.push_back(i % pp.value());
  return out;
}

inline GroupElement embed(const SubgroupDescriptor& g, std::uint64_t i) {
  GroupElement out = crt_decompose(g.factors, i % g.n);
  const auto m = g.moduli();
  for (std::size_t t = 0; t < out.size(); ++t) out[t] %= m[t];
  return out;
}

/// Mixed-radix position of an element of G (first coordinate most significant).
inline std::size_t element_index(const SubgroupDescriptor& g, const GroupElement& x) {
  const auto m = g.moduli();
  std::size_t idx = 0;
  for (std::size_t t = 0; t < m.size(); ++t) idx = idx * m[t] + x[t];
  return idx;
}

template <typename T>
struct DephasedBlock {
  SubgroupDescriptor g, h;
  Grid<T> values;  // |G| x |H|, indexed by element_index

  DephasedBlock(SubgroupDescriptor g_, SubgroupDescriptor h_)
      : g(std::move(g_)), h(std::move(h_)), values(g.order(), h.order()) {}

  T& at(const GroupElement& x, const GroupElement& y) { return values(element_index(g, x), element_index(h, y)); }
  const T& at(const GroupElement& x, const GroupElement& y) const {
    return values(element_index(g, x), element_index(h, y));
  }
};

namespace detail {
inline bool in_dephased(const SubgroupDescriptor& g, const GroupElement& x) {
  for (std::size_t t = 0; t < x.size(); ++t)
    if (g.r[t] > 0 && x[t] < SubgroupDescriptor::ipow(g.factors[t].p, g.r[t] - 1)) return false;
  return true;
}
inline GroupElement element_at(const SubgroupDescriptor& g, std::size_t idx) {
  const auto m = g.moduli();
  GroupElement x(m.size());
  for (std::size_t t = m.size(); t-- > 0;) {
    x[t] = idx % m[t];
    idx /= m[t];
  }
  return x;
}
}  // namespace detail

/// A_ij = sum over blocks of L^{GH}_{phi_G(i), phi_H(j)}. Blocks must have
/// distinct admissible pairs and vanish outside G° x H°; missing pairs are zero.
template <typename T>
TangentMatrix<T> assemble(std::uint64_t n, const std::vector<DephasedBlock<T>>& blocks) {
  std::map<std::pair<std::vector<unsigned>, std::vector<unsigned>>, bool> seen;
  for (const auto& b : blocks) {
    if (b.g.n != n || b.h.n != n) throw std::invalid_argument("assemble: block for a different N");
    if (!seen.emplace(std::make_pair(b.g.r, b.h.r), true).second) throw std::invalid_argument("assemble: duplicate block");
    const bool adm = admissible_pair(b.g, b.h);
    for (std::size_t x = 0; x < b.values.rows; ++x)
      for (std::size_t y = 0; y < b.values.cols; ++y) {
        if (b.values(x, y) == 0) continue;
        if (!adm || !detail::in_dephased(b.g, detail::element_at(b.g, x)) ||
            !detail::in_dephased(b.h, detail::element_at(b.h, y)))
          throw std::invalid_argument("assemble: block value outside G° x H°");
      }
  }
  TangentMatrix<T> a(n);
  for (const auto& b : blocks) {
    std::vector<std::size_t> gi(n), hj(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      gi[i] = element_index(b.g, embed(b.g, i));
      hj[i] = element_index(b.h, embed(b.h, i));
    }
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < n; ++j) a(i, j) += b.values(gi[i], hj[j]);
  }
  return a;
}

struct BasisLabel {
  SubgroupDescriptor g, h;
  GroupElement x, y;  // x in G°, y in H°
};

struct FourierBasis {
  std::uint64_t n = 1;
  std::vector<BasisLabel> labels;
  std::vector<IntegerTangent> basis;  // basis[k] is the indicator of labels[k]
};

/// One 0/1 tangent per label (G, H, g, h): A_ij = [phi_G(i) = g][phi_H(j) = h].
/// Labels run over admissible pairs in lexicographic order, then (g, h).
inline FourierBasis basis_fourier(std::uint64_t n) {
  FourierBasis fb;
  fb.n = n;
  const auto subs = subgroups(n);
  for (const auto& g : subs)
    for (const auto& h : subs) {
      if (!admissible_pair(g, h)) continue;
      const auto gd = dephased_indices(g), hd = dephased_indices(h);
      std::vector<GroupElement> gi(n), hj(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        gi[i] = embed(g, i);
        hj[i] = embed(h, i);
      }
      for (const auto& x : gd)
        for (const auto& y : hd) {
          IntegerTangent a(n);
          for (std::uint64_t i = 0; i < n; ++i) {
            if (gi[i] != x) continue;
            for (std::uint64_t j = 0; j < n; ++j)
              if (hj[j] == y) a(i, j) = 1;
          }
          fb.labels.push_back({g, h, x, y});
          fb.basis.push_back(std::move(a));
        }
    }
  return fb;
}

/// Rank of a family of integer tangents, as vectors of length N^2.
inline std::size_t tangent_rank(const std::vector<IntegerTangent>& v) {
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(v.size());
  for (const auto& a : v) rows.push_back(a.values());
  return integer_rank(rows);
}

struct ParametrizationReport {
  std::uint64_t n = 0;
  std::size_t count = 0;
  std::uint64_t expected = 0;
  bool count_ok = false;
  bool membership_ok = false;
  bool independent_ok = false;
  std::optional<bool> rational_ok;  // set when the rational kernel was computed
  std::optional<std::size_t> rational_defect;
  bool ok() const { return count_ok && membership_ok && independent_ok && rational_ok.value_or(true); }
};

/// Checks the basis against the closed form, exact membership, exact
/// independence, and (for N <= rational_max_n) d_Q(F_N).
inline ParametrizationReport verify_parametrization(std::uint64_t n, std::uint64_t rational_max_n = 12) {
  ParametrizationReport rep;
  rep.n = n;
  const FourierBasis fb = basis_fourier(n);
  const ButsonMatrix f = fourier(n);
  rep.count = fb.basis.size();
  rep.expected = fourier_defect_closed(n);
  rep.count_ok = rep.count == rep.expected;
  rep.membership_ok = true;
  for (const auto& a : fb.basis)
    if (!in_enveloping(f, a)) {
      rep.membership_ok = false;
      break;
    }
  rep.independent_ok = tangent_rank(fb.basis) == rep.count;
  if (n <= rational_max_n) {
    rep.rational_defect = defect_rational(f).dimension;
    rep.rational_ok = *rep.rational_defect == rep.count;
  }
  return rep;
}

/// Product of tangents at F_N and F_M placed on Z_{NM} through the CRT
/// identification i <-> (i mod N, i mod M); requires gcd(N, M) = 1.
template <typename T>
TangentMatrix<T> crt_product(const TangentMatrix<T>& b, const TangentMatrix<T>& c) {
  const std::size_t n = b.size(), m = c.size();
  if (std::gcd(n, m) != 1) throw std::invalid_argument("crt_product: orders must be coprime");
  const std::size_t nm = n * m;
  TangentMatrix<T> out(nm);
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nm; ++j) out(i, j) = b(i % n, j % n) * c(i % m, j % m);
  return out;
}

}  // namespace hadm
