#include "heartscatter/scattering.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <map>
#include <set>

#include <json.hpp>

#include "heartscatter/error.hpp"

namespace hs {

namespace {

bool leading_one(const TruncatedSeries& f) {
  bool found = false;
  for (auto& [m, c] : f.terms()) {
    if (m.order >= 1 || m.depth >= 1) continue;
    if (found || !is_zero(m.dir) || !m.cls.is_zero() || c != 1) return false;
    found = true;
  }
  return found;
}

long long cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

// Integer containment test for a wall support.
bool support_contains(const Cone& c, const Vec& v, const Vec& normal) {
  if (c.dim() == 2 && v.size() == 3) {
    if (dot(normal, v) != 0) return false;
    const Vec &g1 = c.gens()[0], &g2 = c.gens()[1];
    Vec c12 = cross(g1, g2);
    return dot(cross(v, g2), c12) >= 0 && dot(cross(g1, v), c12) >= 0;
  }
  return c.contains(v);
}

// Image of S under the automorphism z^m -> z^m f^{<n,m>}.
class CrossingMap {
 public:
  CrossingMap(const TruncatedSeries& f, Vec n) : f_(f), n_(std::move(n)) {}
  TruncatedSeries apply(const TruncatedSeries& s) {
    TruncatedSeries out(s.rank(), s.cutoff());
    for (auto& [m, c] : s.terms()) {
      long long e = dot(n_, m.dir);
      if (e == 0) {
        out.add_term(m, c);
        continue;
      }
      out += power(e).times_monomial(m, c);
    }
    return out;
  }

 private:
  const TruncatedSeries& power(long long e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(e, f_.power(e)).first->second;
  }
  TruncatedSeries f_;
  Vec n_;
  std::map<long long, TruncatedSeries> cache_;
};

struct Crossing {
  Vec q;       // projected ray in the joint's quotient plane
  int wall;
  Vec n_app;   // positive on the side the loop comes from
};

const std::vector<Vec>& reference_vectors3() {
  static const std::vector<Vec> R = {{7919, 6007, 4111}, {-5851, 7417, 3023},
                                     {2749, -6803, 7541}, {9001, 1117, -4057}};
  return R;
}
const std::vector<Vec>& reference_vectors2() {
  static const std::vector<Vec> R = {{7919, 6007}, {-5851, 7417}, {2749, -6803}};
  return R;
}

// Orients `n` so that it is positive on the side a counterclockwise loop
// arrives from when it crosses the ray q; nbar is n on the quotient.
Vec approach_normal(const Vec& n, const Vec& nbar, const Vec& q) {
  Vec vel{-q[1], q[0]};
  long long s = dot(nbar, vel);
  if (s == 0) throw Error("wall is radial at the joint");
  return s < 0 ? n : neg(n);
}

std::vector<Crossing> joint_crossings(const WallStructure& ws, const Joint& j, Vec& ref) {
  std::vector<Crossing> out;
  if (ws.rank == 2) {
    for (int wi : j.walls) {
      const Wall& w = ws.walls[wi];
      Vec q = w.support.gens()[0];
      out.push_back({q, wi, approach_normal(w.normal, w.normal, q)});
    }
    for (auto& r : reference_vectors2()) {
      bool ok = std::all_of(out.begin(), out.end(),
                            [&](const Crossing& c) { return cross2(r, c.q) != 0; });
      if (ok) {
        ref = r;
        return out;
      }
    }
    throw Error("no generic reference direction");
  }
  RayProjection P(j.ray);
  for (int wi : j.walls) {
    const Wall& w = ws.walls[wi];
    Vec nbar = P.induced_covector(w.normal);
    const Vec &g1 = w.support.gens()[0], &g2 = w.support.gens()[1];
    std::vector<Vec> far;
    if (g1 == j.ray) far = {g2};
    else if (g2 == j.ray) far = {g1};
    else far = {g1, g2};
    for (auto& g : far) {
      Vec q = primitive(P.project(g));
      out.push_back({q, wi, approach_normal(w.normal, nbar, q)});
    }
  }
  for (auto& R : reference_vectors3()) {
    Vec r = P.project(R);
    if (is_zero(r)) continue;
    bool ok = std::all_of(out.begin(), out.end(),
                          [&](const Crossing& c) { return cross2(r, c.q) != 0; });
    if (ok) {
      ref = r;
      return out;
    }
  }
  throw Error("no generic reference direction");
}

void sort_ccw(std::vector<Crossing>& cs, const Vec& ref) {
  auto half = [&](const Vec& v) {
    long long c = cross2(ref, v);
    return (c > 0 || (c == 0 && dot(ref, v) > 0)) ? 0 : 1;
  };
  std::stable_sort(cs.begin(), cs.end(), [&](const Crossing& a, const Crossing& b) {
    int ha = half(a.q), hb = half(b.q);
    if (ha != hb) return ha < hb;
    long long c = cross2(a.q, b.q);
    if (c != 0) return c > 0;
    return a.wall < b.wall;
  });
}

RingAutomorphism identity_automorphism(int rank, int cutoff) {
  RingAutomorphism a;
  for (int k = 0; k < rank; ++k) {
    Vec e(rank, 0);
    e[k] = 1;
    a.images.push_back(TruncatedSeries::monomial(rank, cutoff, Monomial(e, CurveClass())));
  }
  return a;
}

long budget_from_env(long configured) {
  if (configured >= 0) return configured;
  if (const char* s = std::getenv("HEARTSCATTER_BUDGET")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && v > 0) return v;
  }
  return 10000;
}

}  // namespace

Wall::Wall(Cone support_, Vec direction_, TruncatedSeries function_)
    : support(std::move(support_)), direction(std::move(direction_)),
      function(std::move(function_)) {
  int n = static_cast<int>(direction.size());
  if (support.dim() != n - 1 || support.ambient() != n)
    throw Error("wall support must have codimension one");
  if (function.rank() != n) throw Error("wall function rank mismatch");
  normal = normal_covector(support.gens());
  if (is_zero(direction)) {
    // mixed wall: any exponents tangent to the support
    for (auto& [m, c] : function.terms())
      if (dot(normal, m.dir) != 0)
        throw Error("wall function term " + monomial_canonical(m) + " is not tangent to the wall");
  } else {
    if (primitive(direction) != direction) throw Error("wall direction must be primitive");
    if (!span_coords(support.gens(), to_qvec(direction)))
      throw Error("wall direction must lie in the span of its support");
    for (auto& [m, c] : function.terms()) {
      // m.dir = -k * direction with k >= 0
      long long k = 0;
      for (int i = 0; i < n; ++i)
        if (direction[i] != 0) {
          k = -m.dir[i] / direction[i];
          break;
        }
      if (k < 0 || m.dir != scale(direction, -k))
        throw Error("wall function term " + monomial_canonical(m) +
                    " is not a power of z^{-direction}");
    }
  }
  if (!leading_one(function)) throw Error("wall function must have constant term 1");
  incoming = !is_zero(direction) && support.contains(neg(direction));
}

TruncatedSeries cross(const Wall& w, const Monomial& m, int side) {
  Vec n = side >= 0 ? w.normal : neg(w.normal);
  TruncatedSeries s = TruncatedSeries::monomial(w.function.rank(), w.function.cutoff(), m);
  CrossingMap cm(w.function, n);
  return cm.apply(s);
}

void WallStructure::add_wall(const Wall& w) {
  for (size_t i = 0; i < walls.size(); ++i) {
    if (walls[i].support == w.support && walls[i].direction == w.direction) {
      walls[i].function = walls[i].function * w.function.truncated(cutoff);
      if (walls[i].function.is_one()) walls.erase(walls.begin() + i);
      return;
    }
  }
  if (w.function.is_one()) return;
  Wall c = w;
  c.function = w.function.truncated(cutoff);
  walls.push_back(std::move(c));
}

std::vector<Wall> WallStructure::sorted() const {
  std::vector<Wall> v = walls;
  std::stable_sort(v.begin(), v.end(), [](const Wall& a, const Wall& b) {
    if (!(a.support == b.support)) return a.support < b.support;
    return a.direction < b.direction;
  });
  return v;
}

bool RingAutomorphism::is_identity() const {
  for (size_t k = 0; k < images.size(); ++k) {
    auto& s = images[k];
    if (s.size() != 1) return false;
    auto& [m, c] = *s.terms().begin();
    if (c != 1 || !m.cls.is_zero()) return false;
    for (size_t i = 0; i < m.dir.size(); ++i)
      if (m.dir[i] != (i == k ? 1 : 0)) return false;
  }
  return true;
}

std::vector<Joint> enumerate_joints(const WallStructure& ws) {
  std::vector<Joint> out;
  if (ws.walls.empty()) return out;
  if (ws.rank == 2) {
    Joint j;
    for (size_t i = 0; i < ws.walls.size(); ++i) j.walls.push_back(static_cast<int>(i));
    out.push_back(j);
    return out;
  }
  if (ws.rank != 3) throw Error("joints are implemented for rank 2 and 3");
  std::set<Vec> rays;
  for (auto& w : ws.walls)
    for (auto& g : w.support.gens()) rays.insert(g);
  for (size_t i = 0; i < ws.walls.size(); ++i)
    for (size_t k = i + 1; k < ws.walls.size(); ++k) {
      const Wall &a = ws.walls[i], &b = ws.walls[k];
      if (a.normal == b.normal) continue;
      Vec d = primitive(cross(a.normal, b.normal));
      for (const Vec& s : {d, neg(d)})
        if (support_contains(a.support, s, a.normal) && support_contains(b.support, s, b.normal))
          rays.insert(s);
    }
  for (auto& r : rays) {
    Joint j{r, {}};
    for (size_t i = 0; i < ws.walls.size(); ++i)
      if (support_contains(ws.walls[i].support, r, ws.walls[i].normal))
        j.walls.push_back(static_cast<int>(i));
    out.push_back(std::move(j));
  }
  return out;
}

RingAutomorphism loop_product(const WallStructure& ws, const Joint& j, int cutoff) {
  int N = cutoff < 0 ? ws.cutoff : cutoff;
  Vec ref;
  auto cs = joint_crossings(ws, j, ref);
  sort_ccw(cs, ref);
  RingAutomorphism a = identity_automorphism(ws.rank, N);
  for (auto& c : cs) {
    CrossingMap cm(ws.walls[c.wall].function.truncated(N), c.n_app);
    for (auto& img : a.images) img = cm.apply(img);
  }
  return a;
}

RingAutomorphism loop_product_at(const WallStructure& ws, const Vec& ray, int cutoff) {
  Joint j{ray, {}};
  for (size_t i = 0; i < ws.walls.size(); ++i)
    if (ws.rank == 2 || support_contains(ws.walls[i].support, ray, ws.walls[i].normal))
      j.walls.push_back(static_cast<int>(i));
  return loop_product(ws, j, cutoff);
}

std::vector<DefectTerm> defect(const WallStructure& ws, const Joint& j, int k) {
  RingAutomorphism a = loop_product(ws, j, k);
  int n = ws.rank;
  std::map<Monomial, QVec> u;
  for (int e = 0; e < n; ++e) {
    Vec ne(n, 0);
    ne[e] = -1;
    TruncatedSeries h = a.images[e].times_monomial(Monomial(ne, CurveClass())) -
                        TruncatedSeries::one(n, k);
    for (auto& [m, c] : h.terms()) {
      if (m.order < k)
        throw Error("loop at joint " + vec_to_string(j.ray) + " is not consistent below order " +
                    std::to_string(k));
      if (m.order > k) continue;
      auto it = u.try_emplace(m, QVec(n, 0)).first;
      it->second[e] = c;
    }
  }
  std::vector<DefectTerm> out;
  for (auto& [m, uv] : u) {
    DefectTerm t;
    t.mono = m;
    bool radial = n == 2 ? is_zero(m.dir) : is_zero(cross(m.dir, j.ray));
    if (radial) {
      t.radial = true;
      out.push_back(t);
      continue;
    }
    Vec nrm, q;
    if (n == 2) {
      nrm = normal_covector({m.dir});
      q = primitive(neg(m.dir));
      t.normal = approach_normal(nrm, nrm, q);
    } else {
      RayProjection P(j.ray);
      nrm = normal_covector({j.ray, m.dir});
      q = primitive(P.project(neg(m.dir)));
      t.normal = approach_normal(nrm, P.induced_covector(nrm), q);
    }
    int piv = 0;
    while (t.normal[piv] == 0) ++piv;
    Q lambda = uv[piv] / Q(static_cast<long>(t.normal[piv]));
    for (int i = 0; i < n; ++i)
      if (uv[i] != lambda * Q(static_cast<long>(t.normal[i])))
        throw Error("defect at joint " + vec_to_string(j.ray) + " is not of wall-crossing form");
    t.coeff = -lambda;
    out.push_back(t);
  }
  return out;
}

WallStructure complete(const WallStructure& input, int N, const CompletionOptions& opt,
                       CompletionStats* stats) {
  if (N < 0) throw Error("negative cutoff");
  long budget = budget_from_env(opt.budget);
  WallStructure cur(input.rank, N);
  for (auto& w : input.walls) cur.add_wall(w);
  std::vector<long> version(cur.walls.size(), 0);
  long next_version = 1;

  auto insert = [&](const Wall& w) {
    for (size_t i = 0; i < cur.walls.size(); ++i)
      if (cur.walls[i].support == w.support && cur.walls[i].direction == w.direction) {
        cur.walls[i].function = cur.walls[i].function * w.function;
        version[i] = next_version++;
        return;
      }
    cur.walls.push_back(w);
    version.push_back(next_version++);
  };

  for (int k = 1; k <= N; ++k) {
    std::map<Vec, std::vector<long>> clean;
    int inserted = 0, round = 0;
    for (;;) {
      ++round;
      auto joints = enumerate_joints(cur);
      std::vector<std::vector<long>> sig(joints.size());
      std::vector<size_t> todo;
      for (size_t i = 0; i < joints.size(); ++i) {
        for (int wi : joints[i].walls) {
          sig[i].push_back(wi);
          sig[i].push_back(version[wi]);
        }
        auto it = clean.find(joints[i].ray);
        if (it == clean.end() || it->second != sig[i]) todo.push_back(i);
      }
      std::vector<std::vector<DefectTerm>> res(todo.size());
      std::vector<std::exception_ptr> errs(todo.size());
      const long count = static_cast<long>(todo.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
      for (long t = 0; t < count; ++t) {
        try {
          res[t] = defect(cur, joints[todo[t]], k);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      }
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
      std::vector<Wall> fresh;
      const Joint* radial_at = nullptr;
      for (size_t t = 0; t < todo.size(); ++t) {
        const Joint& j = joints[todo[t]];
        if (res[t].empty()) {
          clean[j.ray] = sig[todo[t]];
          continue;
        }
        for (auto& d : res[t]) {
          if (d.radial) {
            radial_at = &j;
            continue;
          }
          Vec dir = primitive(neg(d.mono.dir));
          Cone support = cur.rank == 2 ? Cone({dir}) : Cone({j.ray, dir});
          TruncatedSeries f = TruncatedSeries::monomial(cur.rank, N, d.mono, d.coeff).exp_nilpotent();
          Wall w(support, dir, f);
          if (w.incoming) throw Error("completion produced an incoming wall");
          fresh.push_back(std::move(w));
        }
      }
      if (fresh.empty()) {
        if (radial_at)
          throw Error("radial defect at joint " + vec_to_string(radial_at->ray) + " in order " +
                      std::to_string(k));
        break;
      }
      for (auto& w : fresh) insert(w);
      inserted += static_cast<int>(fresh.size());
      if (opt.on_round) opt.on_round(k, round, static_cast<int>(fresh.size()));
      if (inserted > budget)
        throw BudgetError("insertion budget exceeded at order " + std::to_string(k));
    }
    if (stats) {
      stats->rounds_per_order.push_back(round);
      stats->insertions_per_order.push_back(inserted);
    }
  }
  WallStructure out(cur.rank, N);
  for (auto& w : cur.walls) {
    if (w.function.is_one()) continue;
    w.function.require_integral("completed wall function");
    out.walls.push_back(w);
  }
  return out;
}

bool verify_consistent(const WallStructure& ws) {
  for (auto& j : enumerate_joints(ws))
    if (!loop_product(ws, j).is_identity()) return false;
  return true;
}

std::vector<Wall> widget(const Fan& fan, int ray_index, int toric_gen,
                         const std::map<int, int>& intersections, int cutoff) {
  if (ray_index < 0 || ray_index >= static_cast<int>(fan.rays().size()))
    throw Error("widget ray not in fan");
  const Vec& m = fan.rays()[ray_index];
  Monomial tm(m, CurveClass::gen(toric_gen));
  TruncatedSeries base = TruncatedSeries::binomial(fan.rank(), cutoff, tm);
  std::vector<Wall> out;
  for (size_t i = 0; i < fan.codim1().size(); ++i) {
    auto& ids = fan.codim1()[i];
    if (std::find(ids.begin(), ids.end(), ray_index) == ids.end()) continue;
    auto it = intersections.find(static_cast<int>(i));
    int d = it == intersections.end() ? 0 : it->second;
    if (d < 0) throw Error("negative intersection number");
    if (d == 0) continue;
    out.emplace_back(fan.codim1_cone(static_cast<int>(i)), neg(m), base.power(d));
  }
  return out;
}

RingAutomorphism path_product(const WallStructure& ws, const std::vector<QVec>& pts) {
  RingAutomorphism a = identity_automorphism(ws.rank, ws.cutoff);
  for (size_t s = 0; s + 1 < pts.size(); ++s) {
    const QVec &A = pts[s], &B = pts[s + 1];
    struct Hit {
      Q t;
      int wall;
      Vec n;
    };
    std::vector<Hit> hits;
    for (size_t i = 0; i < ws.walls.size(); ++i) {
      const Wall& w = ws.walls[i];
      Q sa = dot(w.normal, A), sb = dot(w.normal, B);
      if (sa == 0 || sb == 0) {
        QVec P = sa == 0 ? A : B;
        if (w.support.contains(P)) throw NonGenericError("path endpoint lies on a wall");
        continue;
      }
      if ((sa > 0) == (sb > 0)) continue;
      Q t = sa / (sa - sb);
      QVec P(A.size());
      for (size_t k = 0; k < A.size(); ++k) P[k] = A[k] + t * (B[k] - A[k]);
      if (!w.support.contains(P)) continue;
      if (!w.support.contains_in_relative_interior(P))
        throw NonGenericError("path meets a wall boundary");
      hits.push_back({t, static_cast<int>(i), sa > 0 ? w.normal : neg(w.normal)});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
      return x.t != y.t ? x.t < y.t : x.wall < y.wall;
    });
    for (size_t h = 1; h < hits.size(); ++h)
      if (hits[h].t == hits[h - 1].t &&
          ws.walls[hits[h].wall].normal != ws.walls[hits[h - 1].wall].normal)
        throw NonGenericError("path passes through a joint");
    for (auto& h : hits) {
      CrossingMap cm(ws.walls[h.wall].function, h.n);
      for (auto& img : a.images) img = cm.apply(img);
    }
  }
  return a;
}

std::string walls_json(const WallStructure& ws) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (auto& w : ws.sorted()) {
    nlohmann::ordered_json o;
    o["support"] = w.support.gens();
    o["direction"] = w.direction;
    o["function"] = w.function.canonical();
    o["pretty"] = w.function.pretty();
    o["incoming"] = w.incoming;
    arr.push_back(o);
  }
  return arr.dump(2) + "\n";
}

std::string walls_table(const WallStructure& ws) {
  std::string out;
  for (auto& w : ws.sorted()) {
    std::string sup = "<";
    for (size_t i = 0; i < w.support.gens().size(); ++i)
      sup += (i ? "," : "") + vec_to_string(w.support.gens()[i]);
    sup += ">";
    out += sup + "  " + w.function.pretty() + (w.incoming ? "  incoming" : "") + "\n";
  }
  return out;
}

}  // namespace hs
