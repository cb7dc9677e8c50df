#pragma once
// Blow-up data for the standard examples, built without the config parser.

#include <algorithm>
#include <string>
#include <vector>

#include "heartscatter/heart.hpp"
#include "heartscatter/thetas.hpp"

namespace fx {

struct CenterSpec {
  int ray;
  std::string label, variable;
  int degree;
};

inline hs::Center center(const hs::Fan& fan, const CenterSpec& s) {
  hs::Center c;
  c.ray = s.ray;
  hs::CenterComponent k;
  k.label = s.label;
  k.variable = s.variable;
  for (size_t i = 0; i < fan.codim1().size(); ++i) {
    auto& ids = fan.codim1()[i];
    if (std::find(ids.begin(), ids.end(), s.ray) != ids.end())
      k.intersections[static_cast<int>(i)] = s.degree;
  }
  c.components.push_back(k);
  return c;
}

inline hs::CurveClass L() { return hs::CurveClass::named("L", hs::GenKind::Curve); }

inline hs::BlowupData blowup(const hs::Fan& fan, const std::vector<CenterSpec>& specs, int N,
                             std::vector<hs::CurveClass> kinks = {}) {
  std::vector<hs::Center> cs;
  for (auto& s : specs) cs.push_back(center(fan, s));
  if (kinks.empty()) kinks.assign(fan.codim1().size(), L());
  return hs::make_blowup(fan, cs, kinks, 0, N, true);
}

inline hs::BlowupData two_lines(int N, int d1 = 1, int d2 = 1) {
  return blowup(hs::projective_space_fan(3), {{0, "E1", "t1", d1}, {1, "E2", "t2", d2}}, N);
}

inline hs::BlowupData one_hypersurface(int N, int d) {
  return blowup(hs::projective_space_fan(3), {{0, "E", "t", d}}, N);
}

inline hs::BlowupData p2_blowup(int N) {
  return blowup(hs::projective_space_fan(2), {{0, "E", "t", 1}}, N);
}

inline hs::Fan p1_times_p2() {
  return hs::Fan({{-1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, -1, -1}},
                 {{1, 2, 3}, {1, 3, 4}, {1, 2, 4}, {0, 2, 3}, {0, 3, 4}, {0, 2, 4}});
}

// P^1 x P^2 with a degree-d curve in the divisor of (-1,0,0).
inline hs::BlowupData aak(int N, int d) {
  hs::Fan fan = p1_times_p2();
  hs::CurveClass F = hs::CurveClass::named("F", hs::GenKind::Curve);
  std::vector<hs::CurveClass> kinks(fan.codim1().size(), L());
  for (auto ids : std::vector<std::vector<int>>{{2, 3}, {3, 4}, {2, 4}})
    kinks[fan.codim1_index(ids)] = F;
  return blowup(fan, {{0, "E", "t", d}}, N, kinks);
}

inline hs::WallStructure heart_of(const hs::BlowupData& bd, hs::WallStructure* toric = nullptr) {
  hs::WallStructure ws = hs::complete(hs::build_initial(bd), bd.cutoff);
  if (toric) *toric = ws;
  return hs::to_heart(hs::refine(ws, bd.fan), bd);
}

inline std::string v(const hs::Vec& x) { return hs::vec_to_string(x); }

// "<(g1),(g2)> pretty" lines, sorted; used to compare against hand tables.
inline std::vector<std::string> rows(const hs::WallStructure& ws) {
  std::vector<std::string> out;
  for (auto& w : ws.walls) {
    std::string s = "<";
    for (size_t i = 0; i < w.support.gens().size(); ++i)
      s += (i ? "," : "") + v(w.support.gens()[i]);
    out.push_back(s + "> " + w.function.pretty());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fx
