#pragma once

// Enveloping tangent space and defect of a complex Hadamard matrix, the
// affine / trivial cones, and tangent constructions for tensor products.
//
// A real N x N matrix A lies in the enveloping tangent space at H iff
//   sum_k H_ik conj(H_jk) (A_ik - A_jk) = 0   for all i != j,
// and the defect d(H) is the real dimension of that space.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadm/cyclo.hpp"
#include "hadm/linalg.hpp"
#include "hadm/matrix.hpp"
#include "hadm/numtheory.hpp"
#include "hadm/tangent.hpp"

namespace hadm {

enum class DefectMethod { numeric, rational, closed_form };

inline const char* to_string(DefectMethod m) {
  switch (m) {
    case DefectMethod::numeric: return "numeric";
    case DefectMethod::rational: return "rational";
    case DefectMethod::closed_form: return "closed-form";
  }
  return "?";
}

struct DefectReport {
  std::size_t n = 0;
  DefectMethod method = DefectMethod::numeric;
  std::size_t dimension = 0;
  // Ratio of the singular values straddling the rank cut (numeric only);
  // +inf when every dropped singular value is exactly zero or implicit.
  std::optional<double> gap;
  bool ill_conditioned = false;
  double wall_ms = 0;
  // Exact kernel basis when requested from defect_rational.
  std::vector<RationalTangent> basis;
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline std::vector<cplx> entries_of(const ButsonMatrix& h) { return h.to_complex(); }
inline std::vector<cplx> entries_of(const PhaseMatrix& h) { return h.entries(); }

}  // namespace detail

// ------------------------------------------------------------- numeric defect

/// Real system over unknowns A_ij (column i*N + j): for each pair i < j one
/// row for the real part and one for the imaginary part. N(N-1) rows total.
inline Eigen::MatrixXd enveloping_system(std::span<const cplx> h, std::size_t n) {
  if (h.size() != n * n) throw std::invalid_argument("enveloping_system: size mismatch");
  const std::size_t pairs = n * (n - 1) / 2;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(2 * pairs), Eigen::Index(n * n));
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, row += 2)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx c = h[i * n + k] * std::conj(h[j * n + k]);
        m(row, Eigen::Index(i * n + k)) += c.real();
        m(row + 1, Eigen::Index(i * n + k)) += c.imag();
        m(row, Eigen::Index(j * n + k)) -= c.real();
        m(row + 1, Eigen::Index(j * n + k)) -= c.imag();
      }
  return m;
}

template <typename M>
Eigen::MatrixXd enveloping_system(const M& h) {
  const auto e = detail::entries_of(h);
  return enveloping_system(std::span<const cplx>(e), h.size());
}

/// Minimum gap ratio below which a numeric rank cut is flagged.
inline constexpr double kIllConditionedGap = 1e3;

/// d(H) = N^2 - rank, rank counted from singular values above tol * sigma_max.
template <typename M>
DefectReport defect_numeric(const M& h, double tol = 1e-9) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = h.size();
  DefectReport rep;
  rep.n = n;
  rep.method = DefectMethod::numeric;
  const Eigen::MatrixXd sys = enveloping_system(h);
  if (sys.rows() == 0) {
    rep.dimension = n * n;
    rep.gap = std::numeric_limits<double>::infinity();
    rep.wall_ms = detail::elapsed_ms(t0);
    return rep;
  }
  Eigen::VectorXd sv;
  if (sys.cols() <= 400) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys);
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys);
    sv = svd.singularValues();
  }
  const double smax = sv.size() ? sv(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol * smax) ++rank;
  rep.dimension = n * n - rank;
  if (rank == 0) {
    rep.gap = std::nullopt;
  } else if (rank < std::size_t(sv.size()) && sv(Eigen::Index(rank)) > 0) {
    rep.gap = sv(Eigen::Index(rank - 1)) / sv(Eigen::Index(rank));
  } else {
    rep.gap = std::numeric_limits<double>::infinity();
  }
  rep.ill_conditioned = !rep.gap || *rep.gap < kIllConditionedGap;
  rep.wall_ms = detail::elapsed_ms(t0);
  return rep;
}

// -------------------------------------------------------------- exact defect

/// The enveloping equations of a Butson matrix written over Q: each pair
/// i < j contributes phi(s) rows via cyclo::expand_equation.
inline RationalMatrix enveloping_rational_system(const ButsonMatrix& h) {
  const std::size_t n = h.size();
  RationalMatrix m = RationalMatrix::with_cols(n * n);
  std::vector<cyclo::Term> terms;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      terms.clear();
      for (std::size_t k = 0; k < n; ++k) {
        const std::int64_t e = h.exp(i, k) - h.exp(j, k);
        terms.push_back({e, i * n + k, 1});
        terms.push_back({e, j * n + k, -1});
      }
      for (const auto& row : cyclo::expand_equation(terms, h.order(), n * n)) m.append_row(row);
    }
  return m;
}

/// d_Q(H): dimension of the rational points of the enveloping space.
inline DefectReport defect_rational(const ButsonMatrix& h, bool with_basis = false) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = h.size();
  DefectReport rep;
  rep.n = n;
  rep.method = DefectMethod::rational;
  if (n == 1) {
    rep.dimension = 1;
    if (with_basis) rep.basis.push_back(RationalTangent(1, {mpq_class(1)}));
  } else {
    Kernel k = rational_kernel(enveloping_rational_system(h));
    rep.dimension = k.dimension;
    if (with_basis)
      for (auto& v : k.basis) rep.basis.emplace_back(n, std::move(v));
  }
  rep.wall_ms = detail::elapsed_ms(t0);
  return rep;
}

/// Rational defect needs exact entries.
inline DefectReport defect_rational(const PhaseMatrix&, bool = false) {
  throw std::invalid_argument("defect_rational: requires a Butson matrix (exact entries)");
}

/// d(F_G) = sum_{g in G} [G : <g>] for G = Z_{N_1} x ... x Z_{N_k}.
inline std::uint64_t fourier_defect_sum(std::span<const std::size_t> orders) {
  if (orders.empty()) throw std::invalid_argument("fourier_defect_sum: empty group");
  std::uint64_t size = 1;
  for (auto o : orders) {
    if (o == 0) throw std::invalid_argument("fourier_defect_sum: zero order");
    size *= o;
  }
  std::vector<std::size_t> g(orders.size(), 0);
  std::uint64_t total = 0;
  for (std::uint64_t step = 0; step < size; ++step) {
    std::uint64_t ord = 1;
    for (std::size_t t = 0; t < g.size(); ++t) ord = std::lcm(ord, std::uint64_t(orders[t] / std::gcd(g[t], orders[t])));
    total += size / ord;
    for (std::size_t t = g.size(); t-- > 0;) {
      if (++g[t] < orders[t]) break;
      g[t] = 0;
    }
  }
  return total;
}
inline std::uint64_t fourier_defect_sum(std::initializer_list<std::size_t> orders) {
  std::vector<std::size_t> v(orders);
  return fourier_defect_sum(std::span<const std::size_t>(v));
}

/// d(F_N) = N prod_i (1 + a_i - a_i / p_i), N = prod p_i^{a_i}.
inline std::uint64_t fourier_defect_closed(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("fourier_defect_closed: N must be >= 1");
  mpq_class d(mpz_class(static_cast<unsigned long>(n)));
  for (const auto& f : factorize(n)) {
    mpq_class a(f.a), p(mpz_class(static_cast<unsigned long>(f.p)));
    d *= 1 + a - a / p;
  }
  d.canonicalize();
  if (d.get_den() != 1 || !d.get_num().fits_ulong_p()) throw std::logic_error("fourier_defect_closed: non-integer");
  return d.get_num().get_ui();
}

inline DefectReport defect_closed_form(std::uint64_t n) {
  DefectReport rep;
  rep.n = n;
  rep.method = DefectMethod::closed_form;
  rep.dimension = fourier_defect_closed(n);
  return rep;
}

// -------------------------------------------------------- enveloping membership

/// Exact check of the enveloping equations for integer or rational A.
template <typename T>
  requires TangentMatrix<T>::exact
bool in_enveloping(const ButsonMatrix& h, const TangentMatrix<T>& a) {
  const std::size_t n = h.size();
  if (a.size() != n) throw std::invalid_argument("in_enveloping: size mismatch");
  const auto s = std::int64_t(h.order());
  if constexpr (std::is_same_v<T, std::int64_t>) {
    std::vector<std::int64_t> bucket(h.order());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::fill(bucket.begin(), bucket.end(), 0);
        for (std::size_t k = 0; k < n; ++k) bucket[mod(h.exp(i, k) - h.exp(j, k), s)] += a(i, k) - a(j, k);
        if (!cyclo::vanishes(h.order(), bucket)) return false;
      }
    return true;
  } else {
    std::vector<mpq_class> bucket(h.order());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        for (auto& b : bucket) b = 0;
        for (std::size_t k = 0; k < n; ++k) bucket[mod(h.exp(i, k) - h.exp(j, k), s)] += a(i, k) - a(j, k);
        if (!cyclo::CycloNumber::from_exponent_weights(h.order(), bucket).is_zero()) return false;
      }
    return true;
  }
}

/// Numeric check: every equation has modulus <= tol.
template <typename M>
bool in_enveloping(const M& h, const RealTangent& a, double tol = 1e-9) {
  const std::size_t n = h.size();
  if (a.size() != n) throw std::invalid_argument("in_enveloping: size mismatch");
  const auto e = detail::entries_of(h);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += e[i * n + k] * std::conj(e[j * n + k]) * (a(i, k) - a(j, k));
      if (std::abs(acc) > tol) return false;
    }
  return true;
}

// --------------------------------------------------------- affine membership

/// Exact combinatorial test for the affine tangent cone: for every i != j and
/// every level r of A_ik - A_jk, the sum of H_ik conj(H_jk) over the level
/// set {k : A_ik - A_jk = r} vanishes in Q(zeta_s).
template <typename T>
  requires TangentMatrix<T>::exact
bool affine_membership(const ButsonMatrix& h, const TangentMatrix<T>& a) {
  const std::size_t n = h.size();
  if (a.size() != n) throw std::invalid_argument("affine_membership: size mismatch");
  const auto s = std::int64_t(h.order());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::map<T, std::vector<std::int64_t>> levels;
      for (std::size_t k = 0; k < n; ++k) {
        T r = a(i, k) - a(j, k);
        auto& counts = levels[r];
        if (counts.empty()) counts.assign(h.order(), 0);
        ++counts[mod(h.exp(i, k) - h.exp(j, k), s)];
      }
      for (const auto& [r, counts] : levels)
        if (!cyclo::vanishes(h.order(), counts)) return false;
    }
  return true;
}

/// Level-set grouping tolerance for floating-point exponents.
inline constexpr double kLevelTol = 1e-12;

/// Numeric version of the level-set test. Levels closer than kLevelTol
/// are merged; each level sum must have modulus <= tol.
template <typename M>
bool affine_membership(const M& h, const RealTangent& a, double tol = 1e-9) {
  const std::size_t n = h.size();
  if (a.size() != n) throw std::invalid_argument("affine_membership: size mismatch");
  const auto e = detail::entries_of(h);
  std::vector<std::pair<double, cplx>> terms(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) terms[k] = {a(i, k) - a(j, k), e[i * n + k] * std::conj(e[j * n + k])};
      std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      std::size_t k = 0;
      while (k < n) {
        cplx acc = 0;
        double last = terms[k].first;
        std::size_t l = k;
        while (l < n && terms[l].first - last <= kLevelTol) {
          last = terms[l].first;
          acc += terms[l++].second;
        }
        if (std::abs(acc) > tol) return false;
        k = l;
      }
    }
  return true;
}

/// Cross-validation oracle for the affine cone: evaluates
/// sum_k H_ik conj(H_jk) q^(A_ik - A_jk) at `samples` seeded random q on the
/// unit circle, q^r = e^{i theta r}, and requires modulus <= tol at each.
template <typename M>
bool affine_membership_sampled(const M& h, const RealTangent& a, std::uint64_t seed = 0, int samples = 16,
                               double tol = 1e-9) {
  const std::size_t n = h.size();
  if (a.size() != n) throw std::invalid_argument("affine_membership_sampled: size mismatch");
  const auto e = detail::entries_of(h);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < samples; ++t) {
    const double theta = angle(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        cplx acc = 0;
        for (std::size_t k = 0; k < n; ++k)
          acc += e[i * n + k] * std::conj(e[j * n + k]) * std::polar(1.0, theta * (a(i, k) - a(j, k)));
        if (std::abs(acc) > tol) return false;
      }
  }
  return true;
}

// ----------------------------------------------------------- trivial cone

/// A_ij = a_i + b_j.
template <typename T>
TangentMatrix<T> trivial_tangent(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw std::invalid_argument("trivial_tangent: length mismatch");
  const std::size_t n = a.size();
  TangentMatrix<T> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a[i] + b[j];
  return out;
}
template <typename T>
TangentMatrix<T> trivial_tangent(const std::vector<T>& a, const std::vector<T>& b) {
  return trivial_tangent(std::span<const T>(a), std::span<const T>(b));
}

template <typename T>
struct TrivialSplit {
  std::vector<T> a;
  std::vector<T> b;
  TangentMatrix<T> dephased;  // zero first row and column
};

/// A = trivial_tangent(a, b) + A° with a_i = A_i0, b_j = A_0j - A_00.
template <typename T>
TrivialSplit<T> split_trivial(const TangentMatrix<T>& m) {
  const std::size_t n = m.size();
  TrivialSplit<T> out;
  out.a.resize(n);
  out.b.resize(n);
  out.dephased = TangentMatrix<T>(n);
  for (std::size_t i = 0; i < n; ++i) out.a[i] = m(i, 0);
  for (std::size_t j = 0; j < n; ++j) out.b[j] = m(0, j) - m(0, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.dephased(i, j) = m(i, j) - m(i, 0) - m(0, j) + m(0, 0);
  return out;
}

// --------------------------------------------------------- tensor products

/// A_{ia,jb} = B_ij C_ab; B and C must lie in the enveloping spaces at H, K.
template <typename T>
  requires TangentMatrix<T>::exact
TangentMatrix<T> tensor_tangent(const ButsonMatrix& h, const TangentMatrix<T>& b, const ButsonMatrix& k,
                                const TangentMatrix<T>& c) {
  if (!in_enveloping(h, b)) throw std::invalid_argument("tensor_tangent: B is not in the enveloping space of H");
  if (!in_enveloping(k, c)) throw std::invalid_argument("tensor_tangent: C is not in the enveloping space of K");
  const std::size_t n = b.size(), m = c.size(), nm = n * m;
  TangentMatrix<T> out(nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t bb = 0; bb < m; ++bb) out(i * m + a, j * m + bb) = b(i, j) * c(a, bb);
  return out;
}

enum class GlueSide { left, right };

/// Parameters of the two gluing formulas for tangent vectors at H (x) K,
/// H of size N and K of size M.
///   left:  A_{ia,jb} = scalar B_ij + weights_j C_ab + X_ia + Y_jb + dita_(a,j)
///          weights has length N, dita is M x N
///   right: A_{ia,jb} = weights_b B_ij + scalar C_ab + X_ia + Y_jb + dita_(i,b)
///          weights has length M, dita is N x M
/// X and Y are N x M grids indexed by (i,a) and (j,b).
struct GlueParams {
  mpq_class scalar = 0;
  std::vector<mpq_class> weights;
  Grid<mpq_class> x, y, dita;
};

inline RationalTangent glue_affine(GlueSide side, const ButsonMatrix& h, const RationalTangent& b,
                                   const ButsonMatrix& k, const RationalTangent& c, const GlueParams& p) {
  const std::size_t n = h.size(), m = k.size(), nm = n * m;
  if (b.size() != n || c.size() != m) throw std::invalid_argument("glue_affine: tangent size mismatch");
  const std::size_t wlen = side == GlueSide::left ? n : m;
  const std::size_t drows = side == GlueSide::left ? m : n, dcols = side == GlueSide::left ? n : m;
  if (p.weights.size() != wlen || p.x.rows != n || p.x.cols != m || p.y.rows != n || p.y.cols != m ||
      p.dita.rows != drows || p.dita.cols != dcols)
    throw std::invalid_argument("glue_affine: parameter shape mismatch");
  if (!affine_membership(h, b)) throw std::invalid_argument("glue_affine: B is not in the affine cone at H");
  if (!affine_membership(k, c)) throw std::invalid_argument("glue_affine: C is not in the affine cone at K");
  RationalTangent out(nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t bb = 0; bb < m; ++bb) {
          mpq_class v = p.x(i, a) + p.y(j, bb);
          if (side == GlueSide::left)
            v += p.scalar * b(i, j) + p.weights[j] * c(a, bb) + p.dita(a, j);
          else
            v += p.weights[bb] * b(i, j) + p.scalar * c(a, bb) + p.dita(i, bb);
          out(i * m + a, j * m + bb) = v;
        }
  return out;
}

// ----------------------------------------------- Dita tangent conditions

inline bool is_dephased(const ButsonMatrix& h) {
  for (std::size_t t = 0; t < h.size(); ++t)
    if (h.exp(0, t) != 0 || h.exp(t, 0) != 0) return false;
  return true;
}

/// Evaluates A^{ij}_{ac} = sum_k H_ik conj(H_jk) A_{ia,kc} in Q(zeta_t) and
/// checks, for i != j and all a, b, c,
///   A^{ij}_{ac} = A^{ij}_{bc},   A^{ij}_{ac} = conj(A^{ji}_{ac}),
/// and that (A^{ii}_{xy})_{xy} lies in the enveloping space of K for each i.
inline bool dita_tangent_conditions(const ButsonMatrix& h, const ButsonMatrix& k, const RationalTangent& a) {
  const std::size_t n = h.size(), m = k.size();
  if (a.size() != n * m) throw std::invalid_argument("dita_tangent_conditions: A must be NM x NM");
  if (!is_dephased(h) || !is_dephased(k)) throw std::invalid_argument("dita_tangent_conditions: H, K must be dephased");
  const std::uint64_t t = std::lcm(h.order(), k.order());
  const ButsonMatrix H = h.at_order(t);
  using cyclo::CycloNumber;

  // coef[i][j][x][y]
  std::vector<CycloNumber> coef;
  coef.reserve(n * n * m * m);
  std::vector<mpq_class> bucket(t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) {
          for (auto& v : bucket) v = 0;
          for (std::size_t kk = 0; kk < n; ++kk)
            bucket[mod(H.exp(i, kk) - H.exp(j, kk), std::int64_t(t))] += a(i * m + x, kk * m + y);
          coef.push_back(CycloNumber::from_exponent_weights(t, bucket));
        }
  auto at = [&](std::size_t i, std::size_t j, std::size_t x, std::size_t y) -> const CycloNumber& {
    return coef[((i * n + j) * m + x) * m + y];
  };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t y = 0; y < m; ++y)
        for (std::size_t x = 0; x < m; ++x) {
          if (!(at(i, j, x, y) == at(i, j, 0, y))) return false;
          if (!(at(i, j, x, y) == at(j, i, x, y).conj())) return false;
        }
    }
  for (std::size_t i = 0; i < n; ++i) {
    RationalTangent diag(m);
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) {
        mpq_class s = 0;
        for (std::size_t kk = 0; kk < n; ++kk) s += a(i * m + x, kk * m + y);
        diag(x, y) = s;
      }
    if (!in_enveloping(k, diag)) return false;
  }
  return true;
}

}  // namespace hadm
