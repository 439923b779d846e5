#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace hadm {

/// Dense rows x cols grid, row-major. Used for deformation parameters.
template <typename T>
struct Grid {
  std::size_t rows = 0, cols = 0;
  std::vector<T> v;

  Grid() = default;
  Grid(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, T(0)) {}

  T& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  bool operator==(const Grid&) const = default;
};

/// Real N x N matrix A of deformation exponents. The scalar type is the
/// exactness flag: mpq_class and int64 are exact, double is numeric.
template <typename T>
class TangentMatrix {
 public:
  using value_type = T;
  static constexpr bool exact = !std::is_floating_point_v<T>;

  TangentMatrix() = default;
  explicit TangentMatrix(std::size_t n) : n_(n), a_(n * n, T(0)) {}
  TangentMatrix(std::size_t n, std::vector<T> values) : n_(n), a_(std::move(values)) {
    if (a_.size() != n * n) throw std::invalid_argument("TangentMatrix: expected n*n values");
  }

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<T>& values() const { return a_; }
  std::vector<T>& values() { return a_; }

  bool is_zero() const {
    for (const auto& v : a_)
      if (v != 0) return false;
    return true;
  }

  TangentMatrix& operator+=(const TangentMatrix& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  TangentMatrix& operator-=(const TangentMatrix& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  TangentMatrix& operator*=(const T& c) {
    for (auto& v : a_) v *= c;
    return *this;
  }
  friend TangentMatrix operator+(TangentMatrix a, const TangentMatrix& b) { return a += b; }
  friend TangentMatrix operator-(TangentMatrix a, const TangentMatrix& b) { return a -= b; }
  friend TangentMatrix operator*(const T& c, TangentMatrix a) { return a *= c; }
  bool operator==(const TangentMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

  template <typename U>
  TangentMatrix<U> cast() const {
    std::vector<U> out;
    out.reserve(a_.size());
    for (const auto& v : a_) {
      if constexpr (std::is_same_v<T, mpq_class> && std::is_same_v<U, double>)
        out.push_back(v.get_d());
      else if constexpr (std::is_same_v<T, std::int64_t> && std::is_same_v<U, mpq_class>)
        out.push_back(mpq_class(mpz_class(static_cast<long>(v))));
      else
        out.push_back(U(v));
    }
    return TangentMatrix<U>(n_, std::move(out));
  }

 private:
  void check(const TangentMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("TangentMatrix: size mismatch");
  }
  std::size_t n_ = 0;
  std::vector<T> a_;
};

using RationalTangent = TangentMatrix<mpq_class>;
using IntegerTangent = TangentMatrix<std::int64_t>;
using RealTangent = TangentMatrix<double>;

}  // namespace hadm
