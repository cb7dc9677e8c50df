#include <gtest/gtest.h>

#include "gen.hpp"
#include "heartscatter/error.hpp"
#include "heartscatter/series.hpp"

using namespace hs;

namespace {

int toric(const char* n) { return Registry::global().intern(n, GenKind::Toric); }
int exc(const char* n) { return Registry::global().intern(n, GenKind::Exceptional); }
int curve(const char* n) { return Registry::global().intern(n, GenKind::Curve); }

Monomial mono(Vec d, CurveClass c = {}) { return Monomial(std::move(d), std::move(c)); }

}  // namespace

TEST(CurveClass, PrintsCurveThenToricThenExceptional) {
  CurveClass c = CurveClass::gen(exc("E2"), -1) + CurveClass::gen(curve("L")) +
                 CurveClass::gen(exc("E1"), -1);
  EXPECT_EQ(c.to_string(), "L-E1-E2");
  EXPECT_EQ(CurveClass().to_string(), "0");
  EXPECT_EQ((c - c).to_string(), "0");
  EXPECT_EQ(CurveClass::gen(curve("L"), 2).to_string(), "2L");
}

TEST(CurveClass, Gradings) {
  CurveClass t = CurveClass::gen(toric("t1"), 2);
  CurveClass e = CurveClass::gen(exc("E1"), -1);
  CurveClass l = CurveClass::gen(curve("L"));
  EXPECT_EQ(t.order(), 2);
  EXPECT_EQ(t.depth(), 2);
  EXPECT_EQ(e.order(), 0);
  EXPECT_EQ(e.depth(), 1);
  EXPECT_EQ(l.order(), 1);
  EXPECT_EQ(l.depth(), 0);
  EXPECT_EQ((l + e).order(), 1);
  EXPECT_EQ((l + e).depth(), 1);
}

TEST(Series, TruncatesOnInsert) {
  int t = toric("t1");
  TruncatedSeries s(2, 2);
  s.add_term(mono({1, 0}, CurveClass::gen(t, 3)), 5);
  EXPECT_TRUE(s.is_zero());
  s.add_term(mono({1, 0}, CurveClass::gen(t, 2)), 5);
  EXPECT_EQ(s.size(), 1u);
}

TEST(Series, PrettyAndCanonical) {
  int t1 = toric("t1"), t2 = toric("t2");
  auto f = TruncatedSeries::binomial(2, 3, mono({1, 1}, CurveClass::gen(t1) + CurveClass::gen(t2)));
  EXPECT_EQ(f.pretty(), "1+t1t2xy");
  auto g = TruncatedSeries::binomial(
      3, 3, mono({1, 0, 0}, CurveClass::gen(curve("L")) + CurveClass::gen(exc("E1"), -1)));
  EXPECT_EQ(g.pretty(), "1+t^{L-E1}x");
  EXPECT_EQ(g.canonical(), "1 · t^{0} · z^{(0,0,0)} + 1 · t^{L-E1} · z^{(1,0,0)}");
}

TEST(Series, MismatchedCutoffsThrow) {
  auto a = TruncatedSeries::one(2, 2), b = TruncatedSeries::one(2, 3);
  EXPECT_THROW(a * b, Error);
}

TEST(Series, NonUnitHasNoInverse) {
  int t = toric("t1");
  auto s = TruncatedSeries::monomial(2, 3, mono({1, 0}, CurveClass::gen(t)));
  EXPECT_THROW(s.inverse(), Error);
}

TEST(Series, BinomialPowers) {
  int t = toric("t1");
  auto f = TruncatedSeries::binomial(2, 4, mono({1, 0}, CurveClass::gen(t)));
  auto f3 = f.power(3);
  EXPECT_EQ(f3.pretty(), "1+3t1x+3t1^2x^2+t1^3x^3");
  EXPECT_EQ(f.power(-2) * f.power(2), TruncatedSeries::one(2, 4));
  // (1+u)^-1 = 1 - u + u^2 - ... truncated at order 4
  EXPECT_EQ(f.inverse().size(), 5u);
}

TEST(Series, IntegralityCheck) {
  int t = toric("t1");
  TruncatedSeries s(2, 3);
  s.add_term(mono({1, 0}, CurveClass::gen(t)), Q(1, 2));
  EXPECT_FALSE(s.integral());
  EXPECT_THROW(s.require_integral("test"), Error);
}

TEST(Series, LogOfBinomialMatchesAlternatingSeries) {
  int t = toric("t1");
  const int N = 6;
  auto f = TruncatedSeries::binomial(2, N, mono({1, 0}, CurveClass::gen(t)));
  auto l = f.log_unit();
  for (int k = 1; k <= N; ++k) {
    Q expect(k % 2 ? 1 : -1, k);
    EXPECT_EQ(l.coefficient(mono({k, 0}, CurveClass::gen(t, k))), expect) << k;
  }
}

TEST(Series, SubstituteRewritesFactorableTerms) {
  int t1 = toric("t1"), t2 = toric("t2");
  CurveClass L = CurveClass::gen(curve("L"));
  CurveClass E1 = CurveClass::gen(exc("E1")), E2 = CurveClass::gen(exc("E2"));
  auto f = TruncatedSeries::binomial(3, 3, mono({1, 1, 0}, CurveClass::gen(t1) + CurveClass::gen(t2)));
  std::vector<SubstRule> rules{{t1, {1, 0, 0}, mono({1, 0, 0}, L - E1)},
                               {t2, {0, 1, 0}, mono({0, 1, 0}, -E2)}};
  EXPECT_EQ(substitute(f, rules, 3).pretty(), "1+t^{L-E1-E2}xy");
  auto bad = TruncatedSeries::binomial(3, 3, mono({1, 1, 0}, CurveClass::gen(t1)));
  EXPECT_THROW(substitute(bad, rules, 3), Error);
}

TEST(SeriesProperty, InverseIsTwoSided) {
  int t = toric("t1");
  gen::Rng r(11);
  for (int i = 0; i < 40; ++i) {
    int N = static_cast<int>(r.uniform(1, 5));
    auto u = gen::unit(r, 2, N, t);
    EXPECT_EQ(u * u.inverse(), TruncatedSeries::one(2, N));
    EXPECT_EQ(u.inverse() * u, TruncatedSeries::one(2, N));
  }
}

TEST(SeriesProperty, ExpLogRoundTrip) {
  int t = toric("t1");
  gen::Rng r(12);
  for (int i = 0; i < 40; ++i) {
    int N = static_cast<int>(r.uniform(1, 5));
    auto u = gen::unit(r, 3, N, t);
    EXPECT_EQ(u.log_unit().exp_nilpotent(), u);
    auto n = gen::nilpotent(r, 3, N, t);
    EXPECT_EQ(n.exp_nilpotent().log_unit(), n);
  }
}

TEST(SeriesProperty, ProductIsCommutativeAssociativeDistributive) {
  int t = toric("t1");
  gen::Rng r(13);
  for (int i = 0; i < 30; ++i) {
    const int N = 4;
    auto a = gen::unit(r, 2, N, t), b = gen::nilpotent(r, 2, N, t), c = gen::unit(r, 2, N, t);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(SeriesProperty, PowerAddsExponents) {
  int t = toric("t1");
  gen::Rng r(14);
  for (int i = 0; i < 30; ++i) {
    auto u = gen::unit(r, 2, 4, t);
    long long j = r.uniform(-3, 3), k = r.uniform(-3, 3);
    EXPECT_EQ(u.power(j) * u.power(k), u.power(j + k));
  }
}
