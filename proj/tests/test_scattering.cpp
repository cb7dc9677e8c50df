#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "heartscatter/error.hpp"
#include "heartscatter/scattering.hpp"
#include "oracles/laurent2d.hpp"
#include "tables.hpp"

using namespace hs;

namespace {

int toric(const char* n) { return Registry::global().intern(n, GenKind::Toric); }

TruncatedSeries one_plus(int rank, int N, Vec d, CurveClass c, long long power = 1) {
  return TruncatedSeries::binomial(rank, N, Monomial(std::move(d), std::move(c))).power(power);
}

std::set<std::string> keyed(const WallStructure& ws) {
  std::set<std::string> s;
  for (auto& w : ws.walls)
    s.insert(vec_to_string(w.support.gens()[0]) + vec_to_string(w.support.gens()[1]) + " " +
             vec_to_string(w.direction) + " " + w.function.canonical());
  return s;
}

WallStructure tropical_vertex_input(int N) {
  int t1 = toric("t1"), t2 = toric("t2");
  WallStructure ws(2, N);
  auto fx = one_plus(2, N, {1, 0}, CurveClass::gen(t1));
  auto fy = one_plus(2, N, {0, 1}, CurveClass::gen(t2));
  ws.add_wall(Wall(Cone({{1, 0}}), {-1, 0}, fx));
  ws.add_wall(Wall(Cone({{-1, 0}}), {-1, 0}, fx));
  ws.add_wall(Wall(Cone({{0, 1}}), {0, -1}, fy));
  ws.add_wall(Wall(Cone({{0, -1}}), {0, -1}, fy));
  return ws;
}

oracle::Poly to_oracle(const TruncatedSeries& f, int t1, int t2) {
  oracle::Poly p;
  for (auto& [m, c] : f.terms())
    p[oracle::Exp{static_cast<int>(m.dir[0]), static_cast<int>(m.dir[1]),
                  static_cast<int>(m.cls.exponent(t1)), static_cast<int>(m.cls.exponent(t2))}] =
        c.get_num().get_si();
  return p;
}

}  // namespace

TEST(Wall, ValidatesDirectionAndTerms) {
  int t = toric("t1");
  auto f = one_plus(3, 2, {1, 0, 0}, CurveClass::gen(t));
  Cone c({{1, 0, 0}, {0, 1, 0}});
  EXPECT_NO_THROW(Wall(c, {-1, 0, 0}, f));
  EXPECT_THROW(Wall(c, {-2, 0, 0}, f), Error);
  EXPECT_THROW(Wall(c, {0, -1, 0}, f), Error);
  EXPECT_THROW(Wall(Cone({{1, 0, 0}}), {-1, 0, 0}, f), Error);
  EXPECT_TRUE(Wall(c, {-1, 0, 0}, f).incoming);
  EXPECT_FALSE(Wall(Cone({{-1, 0, 0}, {0, 1, 0}}), {-1, 0, 0}, f).incoming);
  auto g = one_plus(3, 2, {0, 0, 1}, CurveClass::gen(t));
  EXPECT_THROW(Wall(c, {0, 0, 0}, g), Error);  // mixed wall with a transverse term
}

TEST(Wall, CrossRaisesToPairing) {
  int t = toric("t1");
  const int N = 3;
  auto f = one_plus(3, N, {1, 0, 0}, CurveClass::gen(t));
  Wall w(Cone({{1, 0, 0}, {0, 1, 0}}), {-1, 0, 0}, f);
  Monomial z(Vec{0, 0, 2}, CurveClass());
  auto img = cross(w, z, +1);
  EXPECT_EQ(img, TruncatedSeries::monomial(3, N, z) * f.power(2));
  EXPECT_EQ(cross(w, z, -1), TruncatedSeries::monomial(3, N, z) * f.power(-2));
  Monomial x(Vec{1, 0, 0}, CurveClass());
  EXPECT_EQ(cross(w, x, +1), TruncatedSeries::monomial(3, N, x));
}

TEST(Widget, DegreeDOnThreeCones) {
  for (int d = 1; d <= 3; ++d) {
    auto bd = fx::one_hypersurface(3, d);
    auto ws = build_initial(bd);
    ASSERT_EQ(ws.walls.size(), 3u);
    for (auto& w : ws.walls) {
      EXPECT_TRUE(w.incoming);
      EXPECT_EQ(w.direction, (Vec{-1, 0, 0}));
      EXPECT_TRUE(w.support.contains(Vec{1, 0, 0}));
      EXPECT_EQ(w.function, one_plus(3, 3, {1, 0, 0}, CurveClass::named("t", GenKind::Toric), d));
    }
  }
}

TEST(Joints, SingleWidgetStructure) {
  auto ws = build_initial(fx::one_hypersurface(2, 1));
  std::set<Vec> rays;
  for (auto& j : enumerate_joints(ws)) rays.insert(j.ray);
  for (Vec r : {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}, Vec{-1, -1, -1}})
    EXPECT_TRUE(rays.count(r)) << vec_to_string(r);
}

TEST(Complete, OneWidgetAddsThreeOutgoingWalls) {
  for (int d = 1; d <= 3; ++d) {
    const int N = 4;
    auto bd = fx::one_hypersurface(N, d);
    auto ws = complete(build_initial(bd), N);
    ASSERT_EQ(ws.walls.size(), 6u) << d;
    int outgoing = 0;
    for (auto& w : ws.walls) {
      EXPECT_EQ(w.function, one_plus(3, N, {1, 0, 0}, CurveClass::named("t", GenKind::Toric), d));
      if (!w.incoming) {
        ++outgoing;
        EXPECT_TRUE(w.support.contains(Vec{-1, 0, 0}));
      }
    }
    EXPECT_EQ(outgoing, 3);
    EXPECT_TRUE(verify_consistent(ws));
  }
}

TEST(Complete, TwoLinesOrderTwoInsertsTenWalls) {
  const int N = 2;
  auto bd = fx::two_lines(N);
  auto initial = build_initial(bd);
  auto done = complete(initial, N);
  auto t1 = CurveClass::named("t1", GenKind::Toric), t2 = CurveClass::named("t2", GenKind::Toric);
  using tables::e1, tables::e2, tables::e3, tables::e4, tables::me1, tables::me2, tables::me12;
  WallStructure expect(3, N);
  auto fx1 = one_plus(3, N, {1, 0, 0}, t1), fy = one_plus(3, N, {0, 1, 0}, t2);
  auto fxy = one_plus(3, N, {1, 1, 0}, t1 + t2);
  for (auto& [a, b] : std::vector<std::pair<Vec, Vec>>{{e1, me2}, {e3, me2}, {e4, me2}})
    expect.walls.emplace_back(Cone({a, b}), me2, fy);
  for (auto& [a, b] : std::vector<std::pair<Vec, Vec>>{{e2, me1}, {e3, me1}, {e4, me1}})
    expect.walls.emplace_back(Cone({a, b}), me1, fx1);
  for (auto& a : {e1, e2, e3, e4}) expect.walls.emplace_back(Cone({a, me12}), me12, fxy);
  auto got = keyed(done), base = keyed(initial), want = keyed(expect);
  std::set<std::string> inserted;
  for (auto& s : got)
    if (!base.count(s)) inserted.insert(s);
  EXPECT_EQ(inserted.size(), 10u);
  EXPECT_EQ(inserted, want);
}

TEST(Complete, BudgetIsEnforced) {
  CompletionOptions opt;
  opt.budget = 1;
  EXPECT_THROW(complete(build_initial(fx::two_lines(2)), 2, opt), Error);
}

TEST(Complete, HandToricTableIsConsistent) {
  EXPECT_TRUE(verify_consistent(tables::toric_table(6)));
}

TEST(TropicalVertex, SingleNewRayAgainstBruteForce) {
  const int N = 5;
  int t1 = toric("t1"), t2 = toric("t2");
  auto done = complete(tropical_vertex_input(N), N);
  ASSERT_EQ(done.walls.size(), 5u);
  std::vector<oracle::Ray2> rays;
  int fresh = 0;
  for (auto& w : done.walls) {
    const Vec& g = w.support.gens()[0];
    rays.push_back({static_cast<int>(g[0]), static_cast<int>(g[1]), to_oracle(w.function, t1, t2)});
    if (g == Vec{-1, -1}) {
      ++fresh;
      EXPECT_EQ(w.function.pretty(), "1+t1t2xy");
    }
  }
  EXPECT_EQ(fresh, 1);
  EXPECT_TRUE(oracle::is_identity(oracle::loop(rays, N)));
  std::vector<oracle::Ray2> without;
  for (auto& r : rays)
    if (!(r.dx == -1 && r.dy == -1)) without.push_back(r);
  EXPECT_FALSE(oracle::is_identity(oracle::loop(without, N)));
}

TEST(PathProduct, RejectsPathsThroughJoints) {
  auto ws = build_initial(fx::two_lines(2));
  EXPECT_THROW(path_product(ws, {{Q(1), Q(-1, 2), Q(-1, 3)}, {Q(1), Q(1, 2), Q(1, 3)}}), NonGenericError);
  EXPECT_THROW(path_product(ws, {{Q(3), Q(-1), Q(0)}, {Q(3), Q(1), Q(0)}}), NonGenericError);
}

TEST(PathProduct, LoopAroundJointMatchesLoopProduct) {
  auto ws = complete(build_initial(fx::two_lines(3)), 3);
  // Small square around the joint ray (1,0,0) at x = 1.
  Q e(1, 5), f(1, 7);
  std::vector<QVec> sq{{1, e, f}, {1, -f, e}, {1, -e, -f}, {1, f, -e}, {1, e, f}};
  auto loop = path_product(ws, sq);
  EXPECT_TRUE(loop.is_identity());
}
