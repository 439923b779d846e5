#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hadm/fourier_tangent.hpp"

using namespace hadm;

TEST(Subgroups, CountsAndOrder) {
  EXPECT_EQ(subgroups(1).size(), 1u);
  EXPECT_EQ(subgroups(7).size(), 2u);
  EXPECT_EQ(subgroups(12).size(), 6u);
  const auto s6 = subgroups(6);
  ASSERT_EQ(s6.size(), 4u);
  std::vector<std::uint64_t> orders;
  for (const auto& g : s6) orders.push_back(g.order());
  EXPECT_EQ(orders, (std::vector<std::uint64_t>{1, 3, 2, 6}));  // (r_2, r_3) lexicographic
  for (std::uint64_t n = 1; n <= 60; ++n) EXPECT_EQ(subgroups(n).size(), divisors(n).size()) << n;
}

TEST(Subgroups, PairsAtSix) {
  const auto s = subgroups(6);
  std::size_t pairs = 0, vars = 0;
  for (const auto& g : s)
    for (const auto& h : s)
      if (admissible_pair(g, h)) {
        ++pairs;
        vars += dephased_indices(g).size() * dephased_indices(h).size();
      }
  EXPECT_EQ(pairs, 9u);
  EXPECT_EQ(vars, 15u);
}

TEST(Dephased, Sizes) {
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (const auto& g : subgroups(n)) {
      std::uint64_t expect = 1;
      for (std::size_t t = 0; t < g.r.size(); ++t)
        if (g.r[t] >= 1) expect *= SubgroupDescriptor::ipow(g.factors[t].p, g.r[t] - 1) * (g.factors[t].p - 1);
      EXPECT_EQ(dephased_indices(g).size(), expect);
    }
  const auto z4 = subgroups(4).back();
  EXPECT_EQ(dephased_indices(z4), (std::vector<GroupElement>{{2}, {3}}));
  EXPECT_EQ(dephased_indices(subgroups(4).front()), (std::vector<GroupElement>{{0}}));
}

TEST(Embed, Examples) {
  const auto s6 = subgroups(6);
  const auto z3 = s6[1];  // r = (0, 1)
  EXPECT_EQ(z3.order(), 3u);
  EXPECT_EQ(embed(z3, 4), (GroupElement{0, 1}));
  const auto full = s6.back();
  for (std::uint64_t i = 0; i < 6; ++i) EXPECT_EQ(embed(full, i), crt_decompose(full.factors, i));
  const auto z2 = subgroups(4)[1];
  EXPECT_EQ(embed(z2, 1), (GroupElement{1}));
  EXPECT_EQ(embed(z2, 3), (GroupElement{1}));
  EXPECT_EQ(embed(z2, 2), (GroupElement{0}));
}

TEST(Embed, IsGroupHomomorphism) {
  for (std::uint64_t n : {6, 8, 12, 18, 30})
    for (const auto& g : subgroups(n)) {
      const auto m = g.moduli();
      for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j) {
          auto x = embed(g, i), y = embed(g, j), z = embed(g, (i + j) % n);
          for (std::size_t t = 0; t < m.size(); ++t) EXPECT_EQ((x[t] + y[t]) % m[t], z[t]);
        }
    }
}

TEST(Assemble, ZeroAndPrimeForm) {
  EXPECT_TRUE(assemble<mpq_class>(6, {}).is_zero());
  // N = p: A_ij = L00 + L01_j + L10_i
  const auto s = subgroups(5);
  DephasedBlock<mpq_class> b00(s[0], s[0]), b01(s[0], s[1]), b10(s[1], s[0]);
  b00.at({0}, {0}) = 7;
  for (std::uint64_t j = 1; j < 5; ++j) b01.at({0}, {j}) = mpq_class(long(j)) / 3;
  for (std::uint64_t i = 1; i < 5; ++i) b10.at({i}, {0}) = mpq_class(long(i * i));
  const auto a = assemble<mpq_class>(5, {b00, b01, b10});
  for (std::uint64_t i = 0; i < 5; ++i)
    for (std::uint64_t j = 0; j < 5; ++j) EXPECT_EQ(a(i, j), 7 + mpq_class(long(j)) / 3 + mpq_class(long(i * i)));
}

TEST(Assemble, CheckerboardAtFour) {
  const auto s = subgroups(4);
  DephasedBlock<mpq_class> b(s[1], s[1]);
  b.at({1}, {1}) = 1;
  const auto a = assemble<mpq_class>(4, {b});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(a(i, j), (i % 2 && j % 2) ? 1 : 0);
  EXPECT_TRUE(in_enveloping(fourier(4), a));
}

TEST(Assemble, RejectsBadSupport) {
  const auto s = subgroups(4);
  DephasedBlock<mpq_class> b(s[1], s[1]);
  b.at({0}, {1}) = 1;  // 0 is not in Z_2°
  EXPECT_THROW(assemble<mpq_class>(4, {b}), std::invalid_argument);
  DephasedBlock<mpq_class> c(s[2], s[1]);  // r + s = 3 > 2
  c.at({1}, {1}) = 1;
  EXPECT_THROW(assemble<mpq_class>(4, {c}), std::invalid_argument);
  DephasedBlock<mpq_class> d(s[0], s[0]);
  EXPECT_THROW(assemble<mpq_class>(4, {d, d}), std::invalid_argument);
}

TEST(Assemble, InjectiveOnDephasedBlocks) {
  // assemble is linear; injectivity = the indicator images are independent
  std::mt19937_64 rng(67);
  for (std::uint64_t n : {4, 6, 8, 9, 12}) {
    const auto fb = basis_fourier(n);
    EXPECT_EQ(tangent_rank(fb.basis), fb.basis.size()) << n;
    // random blocks: assembling then comparing against the basis expansion
    std::map<std::pair<std::vector<unsigned>, std::vector<unsigned>>, DephasedBlock<mpq_class>> blocks;
    RationalTangent expect(n);
    for (std::size_t k = 0; k < fb.labels.size(); ++k) {
      const auto& l = fb.labels[k];
      auto key = std::make_pair(l.g.r, l.h.r);
      auto it = blocks.try_emplace(key, l.g, l.h).first;
      const mpq_class v(long(rng() % 11) - 5);
      it->second.at(l.x, l.y) = v;
      expect += v * fb.basis[k].cast<mpq_class>();
    }
    std::vector<DephasedBlock<mpq_class>> list;
    for (auto& [k, b] : blocks) list.push_back(b);
    EXPECT_EQ(assemble(n, list), expect);
  }
}

TEST(Basis, CountsMatchClosedForm) {
  EXPECT_EQ(basis_fourier(1).basis.size(), 1u);
  EXPECT_EQ(basis_fourier(2).basis.size(), 3u);
  EXPECT_EQ(basis_fourier(6).basis.size(), 15u);
  EXPECT_EQ(basis_fourier(8).basis.size(), 20u);
  for (std::uint64_t n = 1; n <= 40; ++n) EXPECT_EQ(basis_fourier(n).basis.size(), fourier_defect_closed(n)) << n;
}

TEST(Basis, LabelOrderIsDeterministic) {
  const auto a = basis_fourier(12), b = basis_fourier(12);
  ASSERT_EQ(a.labels.size(), b.labels.size());
  for (std::size_t k = 0; k < a.labels.size(); ++k) EXPECT_EQ(a.basis[k], b.basis[k]);
  for (std::size_t k = 1; k < a.labels.size(); ++k) {
    const auto& p = a.labels[k - 1];
    const auto& q = a.labels[k];
    EXPECT_LE(std::tie(p.g.r, p.h.r, p.x, p.y), std::tie(q.g.r, q.h.r, q.x, q.y));
  }
}

TEST(Basis, SpansEnvelopingSpace) {
  for (std::uint64_t n = 2; n <= 12; ++n) {
    const auto rep = verify_parametrization(n);
    EXPECT_TRUE(rep.ok()) << n;
    ASSERT_TRUE(rep.rational_defect.has_value());
    EXPECT_EQ(*rep.rational_defect, rep.count);
  }
}

TEST(Basis, VerifyOneAndLarge) {
  const auto one = verify_parametrization(1);
  EXPECT_EQ(one.count, 1u);
  EXPECT_TRUE(one.ok());
  const auto r = verify_parametrization(9);
  EXPECT_EQ(r.count, 21u);
  EXPECT_TRUE(r.ok());
  const auto big = verify_parametrization(30);
  EXPECT_TRUE(big.count_ok && big.membership_ok && big.independent_ok);
  EXPECT_FALSE(big.rational_ok.has_value());
}

TEST(Basis, ContainsTrivialCone) {
  for (std::uint64_t n : {4, 6, 9}) {
    const auto fb = basis_fourier(n);
    std::vector<IntegerTangent> v = fb.basis;
    const std::size_t d = v.size();
    for (std::size_t t = 0; t < n; ++t) {
      IntegerTangent row(n), col(n);
      for (std::size_t k = 0; k < n; ++k) row(t, k) = 1, col(k, t) = 1;
      v.push_back(row);
      v.push_back(col);
    }
    EXPECT_EQ(tangent_rank(v), d) << n;
  }
}

TEST(Basis, CrtMultiplicativity) {
  for (auto [n, m] : {std::pair<std::uint64_t, std::uint64_t>{2, 3}, {3, 4}, {4, 5}}) {
    const auto bn = basis_fourier(n), bm = basis_fourier(m);
    const auto f = fourier(n * m);
    std::vector<IntegerTangent> prod;
    for (const auto& b : bn.basis)
      for (const auto& c : bm.basis) prod.push_back(crt_product(b, c));
    EXPECT_EQ(prod.size(), fourier_defect_closed(n * m));
    EXPECT_EQ(tangent_rank(prod), prod.size());
    for (const auto& a : prod) EXPECT_TRUE(in_enveloping(f, a));
  }
  EXPECT_THROW(crt_product(basis_fourier(2).basis[0], basis_fourier(4).basis[0]), std::invalid_argument);
}
