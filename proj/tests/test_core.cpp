#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hadm/cyclo.hpp"
#include "hadm/io.hpp"
#include "hadm/linalg.hpp"
#include "hadm/matrix.hpp"
#include "hadm/numtheory.hpp"

using namespace hadm;

namespace {

cplx random_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, u(rng));
}

double max_diff(const PhaseMatrix& a, const PhaseMatrix& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
  return d;
}

}  // namespace

// ---------------------------------------------------------------- numtheory

TEST(NumTheory, Factorize) {
  EXPECT_TRUE(factorize(1).empty());
  const auto f = factorize(360);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], (PrimePower{2, 3}));
  EXPECT_EQ(f[1], (PrimePower{3, 2}));
  EXPECT_EQ(f[2], (PrimePower{5, 1}));
  EXPECT_THROW(factorize(0), std::invalid_argument);
}

TEST(NumTheory, PhiMatchesCount) {
  for (std::uint64_t n = 1; n <= 100; ++n) {
    std::uint64_t c = 0;
    for (std::uint64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
    EXPECT_EQ(euler_phi(n), c) << n;
  }
}

TEST(NumTheory, Divisors) {
  EXPECT_EQ(divisors(12), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(1), (std::vector<std::uint64_t>{1}));
}

// -------------------------------------------------------------------- cyclo

TEST(Cyclo, SmallPolynomials) {
  using P = cyclo::IntPoly;
  EXPECT_EQ(cyclo::cyclotomic_poly(1), (P{-1, 1}));
  EXPECT_EQ(cyclo::cyclotomic_poly(2), (P{1, 1}));
  EXPECT_EQ(cyclo::cyclotomic_poly(6), (P{1, -1, 1}));
  EXPECT_EQ(cyclo::cyclotomic_poly(12), (P{1, 0, -1, 0, 1}));
}

TEST(Cyclo, DegreeIsPhi) {
  for (std::uint64_t s = 1; s <= 60; ++s) EXPECT_EQ(cyclo::Field::of(s).degree(), euler_phi(s)) << s;
}

TEST(Cyclo, RootsOfUnityIdentities) {
  for (std::uint64_t s : {1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 30}) {
    using cyclo::CycloNumber;
    EXPECT_EQ(CycloNumber::root_power(s, std::int64_t(s)), CycloNumber::rational(s, 1));
    CycloNumber sum(s);
    for (std::uint64_t e = 0; e < s; ++e) sum += CycloNumber::root_power(s, std::int64_t(e));
    if (s == 1)
      EXPECT_EQ(sum, CycloNumber::rational(1, 1));
    else
      EXPECT_TRUE(sum.is_zero()) << s;
    for (std::int64_t e = 0; e < std::int64_t(s); ++e) {
      const auto z = CycloNumber::root_power(s, e);
      EXPECT_EQ(z * z.conj(), CycloNumber::rational(s, 1));
      EXPECT_NEAR(std::abs(z.to_complex() - unit_root(s, e)), 0.0, 1e-12);
    }
  }
}

TEST(Cyclo, LiftAgreesWithComplexValue) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<mpq_class> b(6);
    for (auto& v : b) v = mpq_class(long(rng() % 7) - 3, long(rng() % 3) + 1);
    const auto x = cyclo::CycloNumber::from_exponent_weights(6, b);
    const auto y = x.lift(30);
    EXPECT_NEAR(std::abs(x.to_complex() - y.to_complex()), 0.0, 1e-9);
    EXPECT_THROW((void)(x + y), std::invalid_argument);
  }
}

TEST(Cyclo, VanishingAgreesWithNumericOracle) {
  std::mt19937_64 rng(7);
  for (std::uint64_t s : {2, 3, 4, 6, 10, 12}) {
    for (int t = 0; t < 300; ++t) {
      std::vector<std::int64_t> c(s);
      for (auto& v : c) v = std::int64_t(rng() % 3);
      cplx z = 0;
      for (std::size_t e = 0; e < s; ++e) z += double(c[e]) * unit_root(s, std::int64_t(e));
      EXPECT_EQ(cyclo::vanishes(s, c), std::abs(z) < 1e-9);
    }
  }
  std::vector<std::int64_t> m(30, 0);
  for (int e : {5, 6, 12, 18, 24, 25}) ++m[e];
  EXPECT_TRUE(cyclo::vanishes(30, m));
}

TEST(Cyclo, ExpandEquationCapturesRealSolutions) {
  // x + z y + z^2 w = 0 over s = 3 holds for real x, y, w iff x = y = w.
  std::vector<cyclo::Term> t{{0, 0, 1}, {1, 1, 1}, {2, 2, 1}};
  auto rows = cyclo::expand_equation(t, 3, 3);
  RationalMatrix m = RationalMatrix::with_cols(3);
  for (const auto& r : rows) m.append_row(r);
  const Kernel k = rational_kernel(m);
  ASSERT_EQ(k.dimension, 1u);
  EXPECT_EQ(k.basis[0][0], k.basis[0][1]);
  EXPECT_EQ(k.basis[0][1], k.basis[0][2]);
}

// ------------------------------------------------------------------- linalg

TEST(Linalg, KernelIsExactAndComplementsRank) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const std::size_t r = 1 + rng() % 7, c = 1 + rng() % 9;
    RationalMatrix m(r, c);
    std::vector<std::vector<std::int64_t>> ints(r, std::vector<std::int64_t>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        // sparse entries so rank deficiency actually occurs
        const std::int64_t v = rng() % 3 == 0 ? std::int64_t(rng() % 9) - 4 : 0;
        ints[i][j] = v;
        m(i, j) = mpq_class(v, long(1 + rng() % 4));
        m(i, j).canonicalize();
        if (v == 0) m(i, j) = 0;
      }
    const Kernel k = rational_kernel(m);
    EXPECT_EQ(k.dimension + rational_rank(m), c);
    for (const auto& v : k.basis)
      for (std::size_t i = 0; i < r; ++i) {
        mpq_class acc = 0;
        for (std::size_t j = 0; j < c; ++j) acc += m(i, j) * v[j];
        EXPECT_EQ(acc, 0);
      }
    // integer pattern has the same zero structure but different scalings; compare
    // the modular and Bareiss ranks on the integer matrix itself
    RationalMatrix mi(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) mi(i, j) = mpq_class(mpz_class(long(ints[i][j])));
    EXPECT_EQ(integer_rank(ints), rational_rank(mi));
    EXPECT_LE(rank_mod_p(ints), rational_rank(mi));
  }
}

// ------------------------------------------------------------------- matrix

TEST(Matrix, FourierIsHadamard) {
  for (std::size_t n = 1; n <= 16; ++n) {
    const auto f = fourier(n);
    EXPECT_TRUE(f.verified());
    EXPECT_TRUE(is_hadamard(ButsonMatrix(n, n, f.exponents()))) << n;
    EXPECT_TRUE(is_hadamard(f.to_phase()));
  }
}

TEST(Matrix, ButsonValidation) {
  EXPECT_THROW(ButsonMatrix(4, 2, {0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(ButsonMatrix(4, 2, {0, 0, 0, 4}), std::invalid_argument);
  EXPECT_FALSE(is_hadamard(ButsonMatrix(2, 2, {0, 0, 0, 0})));
  EXPECT_THROW(require_hadamard(ButsonMatrix(2, 2, {0, 0, 0, 0})), std::invalid_argument);
}

TEST(Matrix, TensorAndGroupFourier) {
  const auto k = fourier_group({2, 2});
  EXPECT_EQ(k.order(), 2u);
  EXPECT_EQ(k.size(), 4u);
  EXPECT_EQ(k, tensor(fourier(2), fourier(2)));
  EXPECT_TRUE(is_hadamard(k));
  EXPECT_EQ(count_ones(k), 10u);
  const auto t = tensor(fourier(2), fourier(3));
  EXPECT_EQ(t.order(), 6u);
  EXPECT_TRUE(is_hadamard(t));
  // (H (x) K)_{ia,jb} = H_ij K_ab
  EXPECT_EQ(t.exp(1 * 3 + 2, 1 * 3 + 1), (3 * 1 + 2 * 2 * 1) % 6);
}

TEST(Matrix, OrderChanges) {
  const auto f = fourier(4);
  const auto g = f.at_order(12);
  EXPECT_EQ(g.exp(1, 1), 3);
  EXPECT_EQ(minimal_butson_order(g), 4u);
  EXPECT_EQ(at_minimal_order(g), f);
  EXPECT_EQ(minimal_butson_order(ButsonMatrix(6, 2, {0, 0, 0, 3})), 2u);
}

TEST(Matrix, F22FamilyIsHadamard) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(is_hadamard(f22_param(random_phase(rng))));
  EXPECT_THROW(f22_param(cplx(2, 0)), std::invalid_argument);
}

TEST(Matrix, DitaDeformationsAreHadamard) {
  std::mt19937_64 rng(11);
  const auto h = fourier(2).to_phase(), k = fourier(3).to_phase();
  for (int t = 0; t < 50; ++t) {
    PhaseGrid ql{3, 2, {}}, qr{2, 3, {}};
    for (int u = 0; u < 6; ++u) ql.v.push_back(random_phase(rng)), qr.v.push_back(random_phase(rng));
    EXPECT_TRUE(is_hadamard(dita_left(h, k, ql)));
    EXPECT_TRUE(is_hadamard(dita_right(h, k, qr)));
  }
  PhaseGrid ones{3, 2, std::vector<cplx>(6, 1.0)};
  EXPECT_LT(max_diff(dita_left(h, k, ones), tensor(h, k)), 1e-12);
  EXPECT_THROW(dita_left(h, k, PhaseGrid{2, 3, std::vector<cplx>(6, 1.0)}), std::invalid_argument);
}

TEST(Matrix, DitaOfF2F2DephasesToF22q) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    PhaseGrid q{2, 2, {random_phase(rng), random_phase(rng), random_phase(rng), random_phase(rng)}};
    const auto d = dephase(dita_right(fourier(2).to_phase(), fourier(2).to_phase(), q)).first;
    const cplx qq = q(0, 0) * q(1, 1) / (q(0, 1) * q(1, 0));
    // swapping the two middle columns gives F_{2,2}^q
    PhaseMove swap = PhaseMove::identity(4);
    swap.col_perm = {0, 2, 1, 3};
    EXPECT_LT(max_diff(apply_move(d, swap), f22_param(qq)), 1e-12);
  }
}

TEST(Matrix, DephaseProducesOnesAndRecordsMove) {
  std::mt19937_64 rng(17);
  const auto f = fourier(6);
  for (int t = 0; t < 50; ++t) {
    ButsonMove m = ButsonMove::identity(6);
    for (auto& v : m.row_phases) v = std::int64_t(rng() % 6);
    for (auto& v : m.col_phases) v = std::int64_t(rng() % 6);
    std::shuffle(m.row_perm.begin(), m.row_perm.end(), rng);
    std::shuffle(m.col_perm.begin(), m.col_perm.end(), rng);
    const auto h = apply_move(f, m);
    EXPECT_TRUE(is_hadamard(ButsonMatrix(6, 6, h.exponents())));
    const auto [d, mv] = dephase(h);
    EXPECT_EQ(apply_move(h, mv), d);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_EQ(d.exp(i, 0), 0);
      EXPECT_EQ(d.exp(0, i), 0);
    }
  }
  ButsonMove bad = ButsonMove::identity(3);
  bad.row_perm = {0, 0, 1};
  EXPECT_THROW(apply_move(fourier(3), bad), std::invalid_argument);
}

TEST(Matrix, PhaseDephase) {
  std::mt19937_64 rng(19);
  PhaseMove m = PhaseMove::identity(4);
  for (auto& z : m.row_phases) z = random_phase(rng);
  for (auto& z : m.col_phases) z = random_phase(rng);
  const auto h = apply_move(f22_param(random_phase(rng)), m);
  const auto [d, mv] = dephase(h);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(std::abs(d(i, 0) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(d(0, i) - 1.0), 0.0, 1e-12);
  }
  EXPECT_TRUE(is_hadamard(d));
}

TEST(Matrix, IndexSwapConjugatesTensor) {
  const auto h = fourier(2), k = fourier(3);
  ButsonMove m = ButsonMove::identity(6);
  m.row_perm = m.col_perm = index_swap_permutation(2, 3);
  EXPECT_EQ(apply_move(tensor(h, k), m), tensor(k, h));
}

// ----------------------------------------------------------------------- io

TEST(Io, ButsonRoundTrip) {
  for (std::size_t n : {1, 2, 6, 9}) {
    std::stringstream ss;
    io::write_butson(ss, fourier(n));
    EXPECT_EQ(io::read_butson(ss), fourier(n));
  }
  std::stringstream hdr;
  io::write_butson(hdr, fourier(6));
  std::string first;
  std::getline(hdr, first);
  EXPECT_EQ(first, "6 6");
}

TEST(Io, ComplexCsvRoundTripIsExact) {
  std::mt19937_64 rng(23);
  const auto h = f22_param(random_phase(rng));
  std::stringstream ss;
  io::write_complex_csv(ss, h);
  const auto g = io::read_complex_csv(ss);
  EXPECT_EQ(g.entries(), h.entries());
}

TEST(Io, ParseErrors) {
  std::stringstream a("2 2\n0 1\n1");
  EXPECT_THROW(io::read_butson(a), io::ParseError);
  std::stringstream b("2 2\n0 1\n1 5\n");
  EXPECT_THROW(io::read_butson(b), io::ParseError);
  std::stringstream c("1,0,1\n");
  EXPECT_THROW(io::read_complex_csv(c), io::ParseError);
  std::stringstream d("1,0,x,0\n1,0,-1,0\n");
  EXPECT_THROW(io::read_complex_csv(d), io::ParseError);
  std::stringstream e("2,0\n");
  EXPECT_THROW(io::read_complex_csv(e), io::ParseError);
  std::stringstream f("2 2\n0 0\n0 1\n");
  EXPECT_TRUE(std::holds_alternative<ButsonMatrix>(io::read_matrix(f)));
}
