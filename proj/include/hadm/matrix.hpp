#pragma once

// Complex Hadamard matrices: exact Butson (exponent) form and floating-point
// phase form, with constructors, equivalence moves and structural predicates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "hadm/cyclo.hpp"
#include "hadm/numtheory.hpp"

namespace hadm {

using cplx = std::complex<double>;

inline cplx unit_root(std::uint64_t s, std::int64_t e) {
  return std::polar(1.0, 2.0 * std::numbers::pi * double(mod(e, std::int64_t(s))) / double(s));
}

class PhaseMatrix;
class ButsonMatrix;
inline ButsonMatrix mark_verified(ButsonMatrix b);

/// N x N matrix with entries zeta_s^exp(i,j), exponents kept in [0, s).
class ButsonMatrix {
 public:
  ButsonMatrix(std::uint64_t s, std::size_t n, std::vector<std::int64_t> exps) : s_(s), n_(n), e_(std::move(exps)) {
    if (s == 0 || n == 0) throw std::invalid_argument("ButsonMatrix: s and n must be positive");
    if (e_.size() != n * n) throw std::invalid_argument("ButsonMatrix: expected n*n exponents");
    for (auto v : e_)
      if (v < 0 || v >= std::int64_t(s)) throw std::invalid_argument("ButsonMatrix: exponent outside [0, s)");
  }

  std::uint64_t order() const { return s_; }
  std::size_t size() const { return n_; }
  std::int64_t exp(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
  const std::vector<std::int64_t>& exponents() const { return e_; }
  cplx entry(std::size_t i, std::size_t j) const { return unit_root(s_, exp(i, j)); }

  /// Set once exact row orthogonality has been established.
  bool verified() const { return verified_; }

  /// Same matrix with exponents rescaled to a multiple t of s.
  ButsonMatrix at_order(std::uint64_t t) const {
    if (t % s_ != 0) throw std::invalid_argument("ButsonMatrix::at_order: t must be a multiple of s");
    std::vector<std::int64_t> e = e_;
    for (auto& v : e) v *= std::int64_t(t / s_);
    ButsonMatrix b(t, n_, std::move(e));
    b.verified_ = verified_;
    return b;
  }

  std::vector<cplx> to_complex() const {
    std::vector<cplx> out(e_.size());
    for (std::size_t k = 0; k < e_.size(); ++k) out[k] = unit_root(s_, e_[k]);
    return out;
  }

  inline PhaseMatrix to_phase() const;

  bool operator==(const ButsonMatrix& o) const { return s_ == o.s_ && n_ == o.n_ && e_ == o.e_; }

 private:
  friend ButsonMatrix mark_verified(ButsonMatrix);
  std::uint64_t s_;
  std::size_t n_;
  std::vector<std::int64_t> e_;
  bool verified_ = false;
};

inline ButsonMatrix mark_verified(ButsonMatrix b) {
  b.verified_ = true;
  return b;
}

/// N x N complex matrix with unit-modulus entries (to within 1e-12).
class PhaseMatrix {
 public:
  static constexpr double kModulusTol = 1e-12;

  PhaseMatrix(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
    if (n == 0) throw std::invalid_argument("PhaseMatrix: n must be positive");
    if (a_.size() != n * n) throw std::invalid_argument("PhaseMatrix: expected n*n entries");
    for (const auto& z : a_)
      if (!(std::abs(std::abs(z) - 1.0) <= kModulusTol))
        throw std::invalid_argument("PhaseMatrix: entry not on the unit circle");
  }

  std::size_t size() const { return n_; }
  cplx operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  cplx entry(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<cplx>& entries() const { return a_; }

 private:
  std::size_t n_;
  std::vector<cplx> a_;
};

inline PhaseMatrix ButsonMatrix::to_phase() const { return PhaseMatrix(n_, to_complex()); }

// ---------------------------------------------------------------- constructors

/// F_N = (w^{ij}), w = e^{2 pi i / N}.
inline ButsonMatrix fourier(std::size_t n) {
  if (n == 0) throw std::invalid_argument("fourier: N must be >= 1");
  std::vector<std::int64_t> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = std::int64_t((i * j) % n);
  return mark_verified(ButsonMatrix(n, n, std::move(e)));
}

/// (H (x) K)_{ia,jb} = H_ij K_ab, lexicographic double index, order lcm(s_H, s_K).
inline ButsonMatrix tensor(const ButsonMatrix& h, const ButsonMatrix& k);

inline ButsonMatrix fourier_group(std::span<const std::size_t> orders) {
  if (orders.empty()) throw std::invalid_argument("fourier_group: empty order list");
  ButsonMatrix out = fourier(orders[0]);
  for (std::size_t t = 1; t < orders.size(); ++t) out = tensor(out, fourier(orders[t]));
  return out;
}
inline ButsonMatrix fourier_group(std::initializer_list<std::size_t> orders) {
  std::vector<std::size_t> v(orders);
  return fourier_group(std::span<const std::size_t>(v));
}

/// Row pair multiset of H_ik conj(H_jk) as exponent counts of length s.
inline std::vector<std::int64_t> row_product_counts(const ButsonMatrix& h, std::size_t i, std::size_t j) {
  const auto s = std::int64_t(h.order());
  std::vector<std::int64_t> counts(h.order(), 0);
  for (std::size_t k = 0; k < h.size(); ++k) ++counts[mod(h.exp(i, k) - h.exp(j, k), s)];
  return counts;
}

/// Exact orthogonality of all row pairs in Q(zeta_s).
inline bool is_hadamard(const ButsonMatrix& h) {
  if (h.verified()) return true;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j)
      if (!cyclo::vanishes(h.order(), row_product_counts(h, i, j))) return false;
  return true;
}

/// Numeric orthogonality: |<r_i, r_j>| <= tol * N for all i != j.
inline bool is_hadamard(const PhaseMatrix& h, double tol = 1e-10) {
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += h(i, k) * std::conj(h(j, k));
      if (std::abs(acc) > tol * double(n)) return false;
    }
  return true;
}

/// Returns h marked verified, or throws if it is not Hadamard.
inline ButsonMatrix require_hadamard(const ButsonMatrix& h) {
  if (!is_hadamard(h)) throw std::invalid_argument("matrix is not complex Hadamard");
  return mark_verified(h);
}

inline ButsonMatrix tensor(const ButsonMatrix& h, const ButsonMatrix& k) {
  const ButsonMatrix hv = require_hadamard(h);
  const ButsonMatrix kv = require_hadamard(k);
  const std::uint64_t t = std::lcm(h.order(), k.order());
  const ButsonMatrix H = hv.at_order(t), K = kv.at_order(t);
  const std::size_t n = H.size(), m = K.size(), nm = n * m;
  std::vector<std::int64_t> e(nm * nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < m; ++b)
          e[(i * m + a) * nm + (j * m + b)] = mod(H.exp(i, j) + K.exp(a, b), std::int64_t(t));
  return mark_verified(ButsonMatrix(t, nm, std::move(e)));
}

inline PhaseMatrix tensor(const PhaseMatrix& h, const PhaseMatrix& k) {
  if (!is_hadamard(h) || !is_hadamard(k)) throw std::invalid_argument("tensor: factor is not complex Hadamard");
  const std::size_t n = h.size(), m = k.size(), nm = n * m;
  std::vector<cplx> e(nm * nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < m; ++b) e[(i * m + a) * nm + (j * m + b)] = h(i, j) * k(a, b);
  return PhaseMatrix(nm, std::move(e));
}

/// Rectangular matrix of unit complex numbers (Dita parameters).
struct PhaseGrid {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> v;
  cplx operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

inline void check_phase_grid(const PhaseGrid& q, std::size_t rows, std::size_t cols) {
  if (q.rows != rows || q.cols != cols || q.v.size() != rows * cols)
    throw std::invalid_argument("Dita deformation: parameter matrix has the wrong shape");
  for (const auto& z : q.v)
    if (!(std::abs(std::abs(z) - 1.0) <= PhaseMatrix::kModulusTol))
      throw std::invalid_argument("Dita deformation: parameter not on the unit circle");
}

/// Left deformation (Q_{aj} H_ij K_ab)_{ia,jb}; Q is M x N.
inline PhaseMatrix dita_left(const PhaseMatrix& h, const PhaseMatrix& k, const PhaseGrid& q) {
  const std::size_t n = h.size(), m = k.size(), nm = n * m;
  check_phase_grid(q, m, n);
  std::vector<cplx> e(nm * nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < m; ++b) e[(i * m + a) * nm + (j * m + b)] = q(a, j) * h(i, j) * k(a, b);
  return PhaseMatrix(nm, std::move(e));
}

/// Right deformation (Q_{ib} H_ij K_ab)_{ia,jb}; Q is N x M.
inline PhaseMatrix dita_right(const PhaseMatrix& h, const PhaseMatrix& k, const PhaseGrid& q) {
  const std::size_t n = h.size(), m = k.size(), nm = n * m;
  check_phase_grid(q, n, m);
  std::vector<cplx> e(nm * nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < m; ++b) e[(i * m + a) * nm + (j * m + b)] = q(i, b) * h(i, j) * k(a, b);
  return PhaseMatrix(nm, std::move(e));
}

/// The one-parameter family F_{2,2}^q.
inline PhaseMatrix f22_param(cplx q) {
  if (!(std::abs(std::abs(q) - 1.0) <= PhaseMatrix::kModulusTol))
    throw std::invalid_argument("f22_param: q must lie on the unit circle");
  const cplx o = 1.0;
  return PhaseMatrix(4, {o, o, o, o,  //
                         o, o, -o, -o,  //
                         o, -o, q, -q,  //
                         o, -o, -q, q});
}

// ------------------------------------------------------------ equivalence moves

/// Row/column phase multiplication followed by row/column permutation.
/// Phase is an exponent (Butson) or a unit complex number.
/// apply: first row r is multiplied by row_phases[r] and column c by
/// col_phases[c]; then new row i is old row row_perm[i] and new column j is
/// old column col_perm[j].
template <typename Phase>
struct EquivalenceMove {
  std::vector<Phase> row_phases;
  std::vector<Phase> col_phases;
  std::vector<std::size_t> row_perm;
  std::vector<std::size_t> col_perm;

  static EquivalenceMove identity(std::size_t n) {
    EquivalenceMove m;
    m.row_phases.assign(n, identity_phase());
    m.col_phases.assign(n, identity_phase());
    m.row_perm.resize(n);
    m.col_perm.resize(n);
    std::iota(m.row_perm.begin(), m.row_perm.end(), 0);
    std::iota(m.col_perm.begin(), m.col_perm.end(), 0);
    return m;
  }

  bool is_identity() const { return *this == identity(row_perm.size()); }
  bool operator==(const EquivalenceMove&) const = default;

 private:
  static Phase identity_phase() {
    if constexpr (std::is_same_v<Phase, cplx>)
      return cplx(1.0, 0.0);
    else
      return Phase{0};
  }
};

using ButsonMove = EquivalenceMove<std::int64_t>;
using PhaseMove = EquivalenceMove<cplx>;

inline bool is_permutation_of_n(const std::vector<std::size_t>& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto v : p) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

template <typename Phase>
void check_move_shape(const EquivalenceMove<Phase>& m, std::size_t n) {
  if (m.row_phases.size() != n || m.col_phases.size() != n)
    throw std::invalid_argument("apply_move: phase vector length mismatch");
  if (!is_permutation_of_n(m.row_perm, n) || !is_permutation_of_n(m.col_perm, n))
    throw std::invalid_argument("apply_move: permutation is not a bijection");
}

inline ButsonMatrix apply_move(const ButsonMatrix& h, const ButsonMove& m) {
  const std::size_t n = h.size();
  const auto s = std::int64_t(h.order());
  check_move_shape(m, n);
  for (auto v : m.row_phases)
    if (v < 0 || v >= s) throw std::invalid_argument("apply_move: row phase exponent outside [0, s)");
  for (auto v : m.col_phases)
    if (v < 0 || v >= s) throw std::invalid_argument("apply_move: column phase exponent outside [0, s)");
  std::vector<std::int64_t> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = m.row_perm[i], c = m.col_perm[j];
      e[i * n + j] = mod(h.exp(r, c) + m.row_phases[r] + m.col_phases[c], s);
    }
  ButsonMatrix out(h.order(), n, std::move(e));
  return h.verified() ? mark_verified(std::move(out)) : out;
}

inline PhaseMatrix apply_move(const PhaseMatrix& h, const PhaseMove& m) {
  const std::size_t n = h.size();
  check_move_shape(m, n);
  std::vector<cplx> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = m.row_perm[i], c = m.col_perm[j];
      e[i * n + j] = h(r, c) * m.row_phases[r] * m.col_phases[c];
    }
  return PhaseMatrix(n, std::move(e));
}

/// Exponent e with z == zeta_s^e, or throws if z is not an s-th root of unity.
inline std::int64_t root_exponent(cplx z, std::uint64_t s, double tol = 1e-9) {
  const double t = std::arg(z) * double(s) / (2.0 * std::numbers::pi);
  const auto e = std::int64_t(std::llround(t));
  if (std::abs(z - unit_root(s, e)) > tol) throw std::invalid_argument("phase is not an s-th root of unity");
  return mod(e, std::int64_t(s));
}

/// Butson input with complex phases: every phase must be an s-th root.
inline ButsonMatrix apply_move(const ButsonMatrix& h, const PhaseMove& m) {
  ButsonMove bm;
  bm.row_perm = m.row_perm;
  bm.col_perm = m.col_perm;
  for (auto z : m.row_phases) bm.row_phases.push_back(root_exponent(z, h.order()));
  for (auto z : m.col_phases) bm.col_phases.push_back(root_exponent(z, h.order()));
  return apply_move(h, bm);
}

/// Divide row i by H_i0, then column j by the updated H_0j. No permutation.
inline std::pair<ButsonMatrix, ButsonMove> dephase(const ButsonMatrix& h) {
  const std::size_t n = h.size();
  const auto s = std::int64_t(h.order());
  ButsonMove m = ButsonMove::identity(n);
  for (std::size_t i = 0; i < n; ++i) m.row_phases[i] = mod(-h.exp(i, 0), s);
  for (std::size_t j = 0; j < n; ++j) m.col_phases[j] = mod(h.exp(0, 0) - h.exp(0, j), s);
  return {apply_move(h, m), std::move(m)};
}

inline std::pair<PhaseMatrix, PhaseMove> dephase(const PhaseMatrix& h) {
  const std::size_t n = h.size();
  PhaseMove m = PhaseMove::identity(n);
  for (std::size_t i = 0; i < n; ++i) m.row_phases[i] = std::conj(h(i, 0));
  for (std::size_t j = 0; j < n; ++j) m.col_phases[j] = std::conj(h(0, j) * m.row_phases[0]);
  // renormalize to the unit circle to keep rounding from accumulating
  for (auto& z : m.row_phases) z /= std::abs(z);
  for (auto& z : m.col_phases) z /= std::abs(z);
  return {apply_move(h, m), std::move(m)};
}

/// #{(i,j) : H_ij = 1}.
inline std::size_t count_ones(const ButsonMatrix& h) {
  return std::size_t(std::count(h.exponents().begin(), h.exponents().end(), 0));
}

inline std::size_t count_ones(const PhaseMatrix& h, double tol = 1e-12) {
  return std::size_t(
      std::count_if(h.entries().begin(), h.entries().end(), [&](cplx z) { return std::abs(z - 1.0) <= tol; }));
}

/// Smallest s' | s such that every exponent is a multiple of s/s'.
inline std::uint64_t minimal_butson_order(const ButsonMatrix& h) {
  std::uint64_t g = h.order();
  for (auto v : h.exponents()) g = std::gcd(g, std::uint64_t(v));
  return h.order() / g;
}

/// The same matrix re-expressed at its minimal order.
inline ButsonMatrix at_minimal_order(const ButsonMatrix& h) {
  const std::uint64_t sm = minimal_butson_order(h);
  const auto f = std::int64_t(h.order() / sm);
  std::vector<std::int64_t> e = h.exponents();
  for (auto& v : e) v /= f;
  ButsonMatrix out(sm, h.size(), std::move(e));
  return h.verified() ? mark_verified(std::move(out)) : out;
}

/// Row (and column) permutation sending index (i,a) of an N x M double index
/// to (a,i): applying it as row_perm and col_perm to H (x)_Q K yields the
/// matching index-swapped layout K-major.
inline std::vector<std::size_t> index_swap_permutation(std::size_t n, std::size_t m) {
  // new index (a,i) in M x N layout reads old index (i,a) in N x M layout
  std::vector<std::size_t> p(n * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i) p[a * n + i] = i * m + a;
  return p;
}

}  // namespace hadm
