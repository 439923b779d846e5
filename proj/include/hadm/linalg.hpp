#pragma once

// Exact rational linear algebra: fraction-free (Bareiss) echelon form,
// nullspaces over Q, and a modular rank used as an independence certificate.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hadm {

/// Dense matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  mpq_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const mpq_class> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void append_row(std::span<const mpq_class> r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw std::invalid_argument("RationalMatrix::append_row: width mismatch");
    for (const auto& v : r) {
      data_.push_back(v);
      data_.back().canonicalize();
    }
    ++rows_;
  }

  /// Empty matrix with a fixed column count, to be filled by append_row.
  static RationalMatrix with_cols(std::size_t cols) {
    RationalMatrix m;
    m.cols_ = cols;
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

/// Row echelon form over Z computed by Bareiss elimination.
struct Echelon {
  std::vector<std::vector<mpz_class>> rows;  // first `rank` rows are nonzero
  std::vector<std::size_t> pivot_cols;
  std::size_t cols = 0;
  std::size_t rank() const { return pivot_cols.size(); }
};

/// Fraction-free elimination. Each row is first cleared of denominators
/// (which does not change the row space), then reduced with the Bareiss
/// update (a*d - b*c) / previous_pivot, where the division is exact.
inline Echelon bareiss_echelon(const RationalMatrix& m) {
  Echelon e;
  e.cols = m.cols();
  std::vector<std::vector<mpz_class>> a;
  a.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    bool nonzero = false;
    for (const auto& v : m.row(i)) {
      if (v == 0) continue;
      nonzero = true;
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    }
    if (!nonzero) continue;
    std::vector<mpz_class> r(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& v = m(i, j);
      r[j] = v.get_num() * (l / v.get_den());
    }
    a.push_back(std::move(r));
  }

  const std::size_t nr = a.size();
  mpz_class prev = 1;
  mpz_class tmp;
  std::size_t r = 0;
  for (std::size_t c = 0; c < e.cols && r < nr; ++c) {
    std::size_t p = r;
    while (p < nr && a[p][c] == 0) ++p;
    if (p == nr) continue;
    std::swap(a[p], a[r]);
    const mpz_class& piv = a[r][c];
    for (std::size_t i = r + 1; i < nr; ++i) {
      auto& row = a[i];
      const mpz_class lead = row[c];
      for (std::size_t j = c + 1; j < e.cols; ++j) {
        // row[j] = (piv*row[j] - lead*a[r][j]) / prev
        mpz_mul(row[j].get_mpz_t(), row[j].get_mpz_t(), piv.get_mpz_t());
        if (lead != 0 && a[r][j] != 0) {
          mpz_mul(tmp.get_mpz_t(), lead.get_mpz_t(), a[r][j].get_mpz_t());
          mpz_sub(row[j].get_mpz_t(), row[j].get_mpz_t(), tmp.get_mpz_t());
        }
        if (prev != 1) mpz_divexact(row[j].get_mpz_t(), row[j].get_mpz_t(), prev.get_mpz_t());
      }
      row[c] = 0;
    }
    prev = piv;
    e.pivot_cols.push_back(c);
    ++r;
  }
  a.resize(r);
  e.rows = std::move(a);
  return e;
}

struct Kernel {
  std::size_t dimension = 0;
  std::vector<std::vector<mpq_class>> basis;  // each satisfies M v = 0 exactly
};

/// Exact nullspace over Q. Basis vector k has a 1 in the k-th free column
/// and zeros in the other free columns.
inline Kernel rational_kernel(const RationalMatrix& m) {
  const Echelon e = bareiss_echelon(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;

  Kernel k;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> v(n, 0);
    v[f] = 1;
    for (std::size_t t = e.rank(); t-- > 0;) {
      const auto& row = e.rows[t];
      const std::size_t pc = e.pivot_cols[t];
      mpq_class acc = 0;
      for (std::size_t j = pc + 1; j < n; ++j)
        if (row[j] != 0 && v[j] != 0) acc += mpq_class(row[j]) * v[j];
      v[pc] = -acc / mpq_class(row[pc]);
    }
    k.basis.push_back(std::move(v));
  }
  k.dimension = k.basis.size();
  return k;
}

inline std::size_t rational_rank(const RationalMatrix& m) { return bareiss_echelon(m).rank(); }

/// Rank of an integer matrix modulo the prime 2^61 - 1. This never exceeds
/// the rank over Q, so a full modular rank certifies rational independence.
inline std::size_t rank_mod_p(const std::vector<std::vector<std::int64_t>>& rows_in) {
  constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;
  auto mulmod = [](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % P);
  };
  auto powmod = [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, b = mulmod(b, b))
      if (e & 1) r = mulmod(r, b);
    return r;
  };
  if (rows_in.empty()) return 0;
  const std::size_t n = rows_in.front().size();
  std::vector<std::vector<std::uint64_t>> a;
  a.reserve(rows_in.size());
  for (const auto& r : rows_in) {
    std::vector<std::uint64_t> row(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t v = r[j] % static_cast<std::int64_t>(P);
      row[j] = static_cast<std::uint64_t>(v < 0 ? v + static_cast<std::int64_t>(P) : v);
    }
    a.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    const std::uint64_t inv = powmod(a[rank][c], P - 2);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      const std::uint64_t f = mulmod(a[i][c], inv);
      for (std::size_t j = c; j < n; ++j) {
        if (a[rank][j] == 0) continue;
        a[i][j] = (a[i][j] + P - mulmod(f, a[rank][j])) % P;
      }
    }
    ++rank;
  }
  return rank;
}

/// Exact rank of an integer matrix: modular rank when it is already full,
/// Bareiss otherwise.
inline std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) return 0;
  const std::size_t full = std::min(rows.size(), rows.front().size());
  const std::size_t r = rank_mod_p(rows);
  if (r == full) return r;
  RationalMatrix m = RationalMatrix::with_cols(rows.front().size());
  std::vector<mpq_class> tmp(rows.front().size());
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) tmp[j] = mpq_class(mpz_class(static_cast<long>(row[j])));
    m.append_row(tmp);
  }
  return rational_rank(m);
}

}  // namespace hadm
