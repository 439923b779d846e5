#include <gtest/gtest.h>

#include <random>

#include "hadm/json.hpp"
#include "hadm/spectrum.hpp"

using namespace hadm;

namespace {

SignedMeasure measure(std::initializer_list<std::pair<std::int64_t, mpq_class>> atoms) {
  SignedMeasure m;
  for (const auto& [k, w] : atoms) m.add(k, w);
  return m;
}

// Independent oracle: every (a, b) in Z_s^N x Z_s^N, no quotient, no convolution.
SignedMeasure brute_mu(const ButsonMatrix& h, std::uint64_t s) {
  const ButsonMatrix m = butson_at(h, s);
  const std::size_t n = m.size();
  std::vector<std::int64_t> a(n, 0), b(n, 0);
  std::map<std::int64_t, long> hist;
  long total = 0;
  while (true) {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c += (a[i] + b[j] + m.exp(i, j)) % std::int64_t(s) == 0;
    ++hist[c];
    ++total;
    std::size_t t = 0;
    for (; t < 2 * n; ++t) {
      auto& v = t < n ? a[t] : b[t - n];
      if (++v < std::int64_t(s)) break;
      v = 0;
    }
    if (t == 2 * n) break;
  }
  SignedMeasure mu;
  for (auto [k, c] : hist) mu.add(k, mpq_class(c, total));
  return mu;
}

SignedMeasure rho(std::uint64_t s) {
  return measure({{0, mpq_class(long(s - 1), long(s))}, {1, mpq_class(1, long(s))}});
}

}  // namespace

TEST(Measure, Arithmetic) {
  EXPECT_EQ(convolve(SignedMeasure::delta(2), SignedMeasure::delta(3)), SignedMeasure::delta(5));
  EXPECT_EQ(convolution_power(rho(2), 2), measure({{0, mpq_class(1, 4)}, {1, mpq_class(1, 2)}, {2, mpq_class(1, 4)}}));
  SignedMeasure z = SignedMeasure::delta(1);
  z += SignedMeasure::delta(1, -1);
  EXPECT_TRUE(z.atoms().empty());
  EXPECT_EQ(linear_combo({{2, SignedMeasure::delta(0)}, {-1, SignedMeasure::delta(0)}}), SignedMeasure::delta(0));
}

TEST(Measure, JsonRoundTrip) {
  const auto m = measure({{1, mpq_class(1, 2)}, {3, mpq_class(1, 2)}});
  const auto j = json::to_json(m);
  EXPECT_EQ(j.dump(), R"({"atoms":[[1,"1/2"],[3,"1/2"]]})");
  EXPECT_EQ(json::measure_from_json(j), m);
}

TEST(PhaseCount, Examples) {
  const auto f6 = fourier(6);
  EXPECT_EQ(phase_count(f6, {6, std::vector<std::int64_t>(6, 0), std::vector<std::int64_t>(6, 0)}), count_ones(f6));
  std::mt19937_64 rng(73);
  for (int t = 0; t < 50; ++t) {
    PhaseAssignment p{2, {std::int64_t(rng() % 2), std::int64_t(rng() % 2)}, {std::int64_t(rng() % 2), std::int64_t(rng() % 2)}};
    const auto c = phase_count(fourier(2), p);
    EXPECT_TRUE(c == 1 || c == 3);
  }
  EXPECT_THROW(phase_count(fourier(4), {2, {0, 0, 0, 0}, {0, 0, 0, 0}}), std::invalid_argument);
}

TEST(PhaseCount, FourChain) {
  // The displayed chain for F_4: each matrix is F_4 with row phases a and
  // column phases b in logarithmic form, zero counts 8,4,1,0,2,3,5,6,7.
  const std::vector<std::vector<std::int64_t>> rows = {
      {0, 0, 0, 0}, {1, 1, 1, 1}, {2, 1, 1, 1}, {2, 1, 2, 1}, {2, 1, 2, 0},
      {0, 1, 2, 0}, {0, 0, 2, 0}, {0, 0, 0, 0}, {0, 0, 3, 0}};
  const std::vector<std::vector<std::int64_t>> firstcol = {
      {0, 0, 0, 0}, {1, 0, 0, 0}, {2, 1, 1, 1}, {2, 1, 1, 1}, {2, 1, 1, 1},
      {0, 3, 3, 3}, {0, 3, 3, 3}, {0, 3, 3, 3}, {0, 3, 3, 3}};
  const std::size_t counts[] = {8, 4, 1, 0, 2, 3, 5, 6, 7};
  const auto f4 = fourier(4);
  for (std::size_t k = 0; k < 9; ++k) {
    // a_i = first column; b_j = first row minus a_0
    PhaseAssignment p{4, firstcol[k], {}};
    for (std::size_t j = 0; j < 4; ++j) p.b.push_back(mod(rows[k][j] - firstcol[k][0], 4));
    EXPECT_EQ(phase_count(f4, p), counts[k]) << k;
  }
}

TEST(PhaseCount, GlobalShiftInvariance) {
  std::mt19937_64 rng(79);
  const auto f = fourier(6);
  for (int t = 0; t < 100; ++t) {
    PhaseAssignment p{6, std::vector<std::int64_t>(6), std::vector<std::int64_t>(6)};
    for (auto& v : p.a) v = std::int64_t(rng() % 6);
    for (auto& v : p.b) v = std::int64_t(rng() % 6);
    const std::int64_t c = std::int64_t(rng() % 6);
    PhaseAssignment q = p;
    for (auto& v : q.a) v = mod(v + c, 6);
    for (auto& v : q.b) v = mod(v - c, 6);
    EXPECT_EQ(phase_count(f, p), phase_count(f, q));
  }
}

TEST(Mu, GoldenValues) {
  EXPECT_EQ(mu_exact(fourier(2), 2), measure({{1, mpq_class(1, 2)}, {3, mpq_class(1, 2)}}));
  EXPECT_EQ(mu_exact(fourier_group({2, 2}), 2),
            measure({{4, mpq_class(1, 32)}, {6, mpq_class(12, 32)}, {8, mpq_class(6, 32)}, {10, mpq_class(12, 32)},
                     {12, mpq_class(1, 32)}}));
  EXPECT_EQ(mu_exact(fourier(2), 4),
            measure({{0, mpq_class(20, 64)}, {1, mpq_class(28, 64)}, {2, mpq_class(12, 64)}, {3, mpq_class(4, 64)}}));
}

TEST(Mu, MatchesBruteForce) {
  for (auto [h, s] : {std::pair{fourier(2), std::uint64_t(2)}, {fourier(2), 6}, {fourier(3), 3}, {fourier(4), 4},
                      {fourier_group({2, 2}), 2}, {fourier(3), 6}}) {
    EXPECT_EQ(mu_exact(h, s), brute_mu(h, s)) << h.size() << " " << s;
  }
}

TEST(Mu, InvariantsAndThreads) {
  for (std::size_t n : {2, 3, 4, 5}) {
    const auto mu = mu_exact(fourier(n), n);
    EXPECT_TRUE(mu.is_probability());
    EXPECT_EQ(mu.mean(), mpq_class(long(n)));
    EnumOptions one;
    one.threads = 1;
    EnumOptions four;
    four.threads = 4;
    EXPECT_EQ(mu_exact(fourier(n), n, one), mu_exact(fourier(n), n, four));
  }
  const auto w8 = mu_exact(fourier_group({2, 2, 2}), 2);
  EXPECT_EQ(w8.mean(), 32);
}

TEST(Mu, TrueSupportSets) {
  auto range = [](std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v;
    for (auto k = lo; k <= hi; ++k) v.push_back(k);
    return v;
  };
  EXPECT_EQ(support(fourier(2), 2), (std::vector<std::int64_t>{1, 3}));
  EXPECT_EQ(support(fourier(3), 3), range(0, 6));
  EXPECT_EQ(support(fourier(4), 4), range(0, 10));
  EXPECT_EQ(support(fourier_group({2, 2}), 2), (std::vector<std::int64_t>{4, 6, 8, 10, 12}));
  EXPECT_EQ(support(fourier(5), 5), range(0, 12));
}

TEST(Mu, CapIsEnforced) {
  EXPECT_THROW(mu_exact(fourier(6), 6), CapExceeded);
  EnumOptions small;
  small.cap = 100;
  EXPECT_THROW(mu_exact(fourier(3), 3, small), CapExceeded);  // 3^5 states
  small.cap = 243;
  EXPECT_NO_THROW(mu_exact(fourier(3), 3, small));
}

TEST(Mu, ClosedFormForTwo) {
  for (std::uint64_t s : {2, 4, 6, 8}) {
    const long S = long(s);
    const auto mu = mu_exact(fourier(2), s);
    const auto r = rho(s);
    const auto combo = linear_combo({{4, convolution_power(r, 3)},
                                     {-6, convolution_power(r, 2)},
                                     {4, r},
                                     {-1, SignedMeasure::delta(0)}});
    const mpq_class s3(S * S * S);
    const auto closed = measure({{0, (S * S * S - 4 * S * S + 6 * S - 4) / s3},
                                 {1, (4 * S * S - 12 * S + 12) / s3},
                                 {2, (6 * S - 12) / s3},
                                 {3, 4 / s3}});
    EXPECT_EQ(mu, combo) << s;
    EXPECT_EQ(mu, closed) << s;
  }
}

TEST(Sampled, DeterministicAndClose) {
  const auto a = mu_sampled(fourier(2), 2, 10000, 5, 1);
  const auto b = mu_sampled(fourier(2), 2, 10000, 5, 3);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.is_probability());
  EXPECT_LE(total_variation(a, mu_exact(fourier(2), 2)), mpq_class(2, 100));
  const auto f6 = mu_sampled(fourier(6), 6, 200000, 0);
  EXPECT_NEAR(f6.mean().get_d(), 6.0, 0.06);
  EXPECT_THROW(mu_sampled(fourier(2), 2, 0, 0), std::invalid_argument);
}

TEST(GaleBerlekamp, ExactValues) {
  struct Case {
    ButsonMatrix h;
    std::uint64_t s;
    std::size_t lo, hi;
  };
  for (const auto& c : {Case{fourier(2), 2, 1, 3}, Case{fourier(3), 3, 0, 6}, Case{fourier(4), 4, 0, 10},
                        Case{fourier_group({2, 2}), 2, 4, 12}, Case{fourier(5), 5, 0, 12}}) {
    const auto mx = gale_berlekamp(c.h, c.s, GBMode::max);
    const auto mn = gale_berlekamp(c.h, c.s, GBMode::min);
    EXPECT_TRUE(mx.exact && mn.exact);
    EXPECT_EQ(mx.value, c.hi);
    EXPECT_EQ(mn.value, c.lo);
    EXPECT_EQ(phase_count(c.h, mx.witness), mx.value);
    EXPECT_EQ(phase_count(c.h, mn.witness), mn.value);
    const auto sup = support(c.h, c.s);
    EXPECT_EQ(sup.front(), std::int64_t(mn.value));
    EXPECT_EQ(sup.back(), std::int64_t(mx.value));
  }
}

TEST(GaleBerlekamp, FallbackIsFlaggedAndSound) {
  GBOptions o;
  o.cap = 10;
  const auto r = gale_berlekamp(fourier(4), 4, GBMode::max, o);
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.value, 10u);
  EXPECT_EQ(phase_count(fourier(4), r.witness), r.value);
  const auto m = gale_berlekamp(fourier(4), 4, GBMode::min, o);
  EXPECT_EQ(phase_count(fourier(4), m.witness), m.value);
}

TEST(Conjecture, Reports) {
  for (const auto& h : {fourier(2), fourier(3), fourier(4), fourier(5), fourier_group({2, 2})}) {
    const auto r = conjecture_report(h);
    ASSERT_TRUE(r.sandwich.has_value());
    EXPECT_TRUE(*r.sandwich);
    EXPECT_TRUE(*r.in_support_hull);
    EXPECT_TRUE(r.skipped.empty());
  }
  const auto r4 = conjecture_report(fourier(4));
  EXPECT_EQ(r4.defect, 8u);
  EXPECT_EQ(r4.gb_min->value, 0u);
  const auto r6 = conjecture_report(fourier(6));
  EXPECT_EQ(r6.skipped, (std::vector<std::string>{"support"}));
  EXPECT_TRUE(r6.sandwich.value());
}
