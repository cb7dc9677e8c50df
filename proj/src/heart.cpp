#include "heartscatter/heart.hpp"

#include <algorithm>
#include <set>

#include "heartscatter/error.hpp"

namespace hs {

namespace {

const CenterComponent* component_for(const BlowupData& bd, int toric_gen, int* ray) {
  for (auto& c : bd.centers)
    for (auto& comp : c.components)
      if (comp.toric_gen == toric_gen) {
        *ray = c.ray;
        return &comp;
      }
  return nullptr;
}

Vec integral_primitive(const QVec& q) {
  mpz_class l = 1;
  for (auto& x : q) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Vec v;
  for (auto& x : q) v.push_back(mpz_class(x.get_num() * (l / x.get_den())).get_si());
  return primitive(v);
}

}  // namespace

BlowupData make_blowup(Fan fan, std::vector<Center> centers, const std::vector<CurveClass>& kinks,
                       int base_cone, int cutoff, bool allow_adjacent) {
  BlowupData bd;
  bd.fan = std::move(fan);
  bd.cutoff = cutoff;
  std::set<int> rays;
  std::set<std::string> names;
  auto& R = Registry::global();
  for (auto& c : centers) {
    if (c.ray < 0 || c.ray >= static_cast<int>(bd.fan.rays().size()))
      throw ConfigError("center ray index out of range");
    if (!rays.insert(c.ray).second) throw ConfigError("two centers on the same ray");
    if (c.components.empty()) throw ConfigError("center without components");
    for (auto& comp : c.components) {
      if (!names.insert(comp.label).second || !names.insert(comp.variable).second)
        throw ConfigError("repeated generator name '" + comp.label + "'/'" + comp.variable + "'");
      comp.exceptional_gen = R.intern(comp.label, GenKind::Exceptional);
      comp.toric_gen = R.intern(comp.variable, GenKind::Toric);
      for (auto& [rho, d] : comp.intersections) {
        if (rho < 0 || rho >= static_cast<int>(bd.fan.codim1().size()))
          throw ConfigError("intersection cone index out of range");
        auto& ids = bd.fan.codim1()[rho];
        if (std::find(ids.begin(), ids.end(), c.ray) == ids.end())
          throw ConfigError("intersection given on a cone not containing the center ray");
        if (d < 0) throw ConfigError("negative intersection number");
      }
    }
  }
  for (auto& cone : bd.fan.maximal()) {
    int count = 0;
    for (int id : cone) count += rays.count(id);
    if (count > 1 && !allow_adjacent) throw ConfigError("center rays share a maximal cone");
  }
  bd.centers = std::move(centers);
  bd.psi = PLFunction(bd.fan, 0, kinks);
  bd.phi0 = PLFunction(bd.fan, base_cone, kinks);
  return bd;
}

WallStructure build_initial(const BlowupData& bd) {
  WallStructure ws(bd.fan.rank(), bd.cutoff);
  for (auto& c : bd.centers)
    for (auto& comp : c.components)
      for (auto& w : widget(bd.fan, c.ray, comp.toric_gen, comp.intersections, bd.cutoff))
        ws.add_wall(w);
  return ws;
}

CurveClass beta_class(const BlowupData& bd, const std::map<int, long long>& exponents, int sigma) {
  int n = bd.fan.rank();
  Vec mbar(n, 0);
  CurveClass beta;
  for (auto& [gen, a] : exponents) {
    int ray = -1;
    const CenterComponent* comp = component_for(bd, gen, &ray);
    if (!comp) throw Error("exponent on a generator that is not a center variable");
    const Vec& m = bd.fan.rays()[ray];
    mbar = add(mbar, scale(m, a));
    beta += bd.psi.value(bd.fan, m).scaled(a);
    beta += CurveClass::gen(comp->exceptional_gen, -a);
  }
  beta += bd.psi.value_on(sigma, neg(mbar));
  return beta;
}

int containing_cone(const Fan& fan, const Cone& support) {
  for (size_t c = 0; c < fan.maximal().size(); ++c) {
    Cone s = fan.maximal_cone(static_cast<int>(c));
    if (std::all_of(support.gens().begin(), support.gens().end(),
                    [&](const Vec& g) { return s.contains(g); }))
      return static_cast<int>(c);
  }
  return -1;
}

WallStructure refine(const WallStructure& ws, const Fan& fan) {
  if (ws.rank == 2) return ws;
  WallStructure out(ws.rank, ws.cutoff);
  for (auto& w : ws.walls) {
    if (containing_cone(fan, w.support) >= 0) {
      out.walls.push_back(w);
      continue;
    }
    const Vec &g1 = w.support.gens()[0], &g2 = w.support.gens()[1];
    std::set<Q> cuts;
    for (size_t c = 0; c < fan.maximal().size(); ++c) {
      Cone sc = fan.maximal_cone(static_cast<int>(c));
      auto& S = sc.gens();
      QVec l1 = *span_coords(S, to_qvec(g1)), l2 = *span_coords(S, to_qvec(g2));
      Q lo = 0, hi = 1;
      bool empty = false;
      for (size_t k = 0; k < l1.size() && !empty; ++k) {
        Q a = l1[k], slope = l2[k] - l1[k];
        if (slope == 0) {
          if (a < 0) empty = true;
        } else if (slope > 0) {
          lo = std::max(lo, Q(-a / slope));
        } else {
          hi = std::min(hi, Q(-a / slope));
        }
      }
      if (empty || lo >= hi) continue;
      if (lo > 0) cuts.insert(lo);
      if (hi < 1) cuts.insert(hi);
    }
    std::vector<Q> ts{0};
    ts.insert(ts.end(), cuts.begin(), cuts.end());
    ts.push_back(1);
    auto point = [&](const Q& t) {
      QVec p(g1.size());
      for (size_t i = 0; i < p.size(); ++i)
        p[i] = (1 - t) * Q(static_cast<long>(g1[i])) + t * Q(static_cast<long>(g2[i]));
      return integral_primitive(p);
    };
    for (size_t i = 0; i + 1 < ts.size(); ++i)
      out.walls.emplace_back(Cone({point(ts[i]), point(ts[i + 1])}), w.direction, w.function);
  }
  return out;
}

WallStructure to_heart(const WallStructure& ws, const BlowupData& bd) {
  WallStructure out(ws.rank, ws.cutoff);
  for (auto& w : ws.walls) {
    int sigma = containing_cone(bd.fan, w.support);
    if (sigma < 0) throw Error("wall not contained in a maximal cone; refine first");
    std::vector<SubstRule> rules;
    for (auto& c : bd.centers) {
      const Vec& m = bd.fan.rays()[c.ray];
      CurveClass shift = bd.phi0.value(bd.fan, m) - bd.phi0.value_on(sigma, m);
      for (auto& comp : c.components)
        rules.push_back({comp.toric_gen, m,
                         Monomial(m, CurveClass::gen(comp.exceptional_gen, -1) + shift)});
    }
    out.walls.emplace_back(w.support, w.direction, substitute(w.function, rules, ws.cutoff));
  }
  return out;
}

WallStructure exceptional_restriction(const WallStructure& ws) {
  WallStructure out(ws.rank, ws.cutoff);
  auto& R = Registry::global();
  for (auto& w : ws.walls) {
    TruncatedSeries f(ws.rank, ws.cutoff);
    for (auto& [m, c] : w.function.terms()) {
      CurveClass k;
      for (auto& [id, e] : m.cls.terms())
        if (R.kind(id) == GenKind::Exceptional) k += CurveClass::gen(id, e);
      f.add_term(Monomial(m.dir, k), c);
    }
    out.walls.emplace_back(w.support, w.direction, f);
  }
  return out;
}

}  // namespace hs
