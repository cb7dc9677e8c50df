#include "heartscatter/thetas.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "heartscatter/error.hpp"

namespace hs {

namespace {

struct Plane {
  Vec normal;  // normalised as in normal_covector
  Cone cone;
  int wall = -1;
  int rho = -1;
};

struct Step {
  QVec y;
  Vec pre, post;      // forward-time directions before and after the event
  int rho = -1;       // fan codim-1 cone met at y
  bool bend = false;
  Monomial mu;        // bend factor
  Q a;
};

QVec along(const QVec& x, const Q& s, const Vec& m) {
  QVec y = x;
  for (size_t i = 0; i < y.size(); ++i) y[i] += s * Q(static_cast<long>(m[i]));
  return y;
}

// Does {x + s m : s > 0} meet the cone, given x and m in its span?
bool ray_meets_cone(const Cone& c, const QVec& x, const Vec& m) {
  auto cx = span_coords(c.gens(), x);
  auto cm = span_coords(c.gens(), to_qvec(m));
  if (!cx || !cm) return false;
  Q lo = 0;
  std::optional<Q> hi;
  for (size_t k = 0; k < cx->size(); ++k) {
    const Q &a = (*cx)[k], &b = (*cm)[k];
    if (b == 0) {
      if (a < 0) return false;
    } else if (b > 0) {
      lo = std::max(lo, Q(-a / b));
    } else {
      Q h = -a / b;
      hi = hi ? std::min(*hi, h) : h;
    }
  }
  return !hi || lo < *hi || (lo == *hi && lo > 0);
}

class Tracer {
 public:
  Tracer(const ThetaContext& ctx, const Vec& m0, int N) : ctx_(ctx), m0_(m0), N_(N) {
    auto& ws = *ctx.ws;
    for (size_t i = 0; i < ws.walls.size(); ++i)
      planes_.push_back({ws.walls[i].normal, ws.walls[i].support, static_cast<int>(i), -1});
    if (ctx.fan && ctx.pl)
      for (size_t r = 0; r < ctx.fan->codim1().size(); ++r) {
        Cone c = ctx.fan->codim1_cone(static_cast<int>(r));
        planes_.push_back({normal_covector(c.gens()), c, -1, static_cast<int>(r)});
      }
  }

  void check_endpoint(const QVec& p) const {
    for (auto& pl : planes_)
      if (pl.cone.contains(p)) throw NonGenericError("endpoint not generic");
  }

  void run(const QVec& p, const Vec& v, std::vector<std::vector<Step>>& out) {
    std::vector<Step> steps;
    dfs(p, v, 0, steps, out);
  }

 private:
  struct Event {
    QVec y;
    std::vector<int> planes;
  };

  std::optional<Event> next(const QVec& x, const Vec& m) const {
    std::optional<Q> best;
    std::vector<int> at;
    for (size_t i = 0; i < planes_.size(); ++i) {
      const Plane& pl = planes_[i];
      Q nx = dot(pl.normal, x);
      long long nm = dot(pl.normal, m);
      if (nm == 0) {
        if (nx == 0 && ray_meets_cone(pl.cone, x, m))
          throw NonGenericError("broken line runs inside a wall");
        continue;
      }
      Q s = -nx / Q(static_cast<long>(nm));
      if (s <= 0) continue;
      if (best && s > *best) continue;
      if (!pl.cone.contains(along(x, s, m))) continue;
      if (!best || s < *best) {
        best = s;
        at.clear();
      }
      at.push_back(static_cast<int>(i));
    }
    if (!best) return std::nullopt;
    Event e{along(x, *best, m), at};
    for (int i : at) {
      if (planes_[i].normal != planes_[at[0]].normal)
        throw NonGenericError("broken line meets a joint");
      if (!planes_[i].cone.contains_in_relative_interior(e.y))
        throw NonGenericError("broken line meets a wall boundary");
    }
    return e;
  }

  const TruncatedSeries& crossing_function(const std::vector<int>& walls, long long e) {
    auto key = std::make_pair(walls, e);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto& ws = *ctx_.ws;
    TruncatedSeries g = TruncatedSeries::one(ws.rank, N_);
    for (int w : walls) g = g * ws.walls[w].function.truncated(N_).power(e);
    return cache_.emplace(key, g).first->second;
  }

  void dfs(const QVec& x, const Vec& m, int depth, std::vector<Step>& steps,
           std::vector<std::vector<Step>>& out) {
    if (steps.size() > 100000) throw Error("broken line trace did not terminate");
    auto ev = next(x, m);
    if (!ev) {
      if (m == m0_) out.push_back(steps);
      return;
    }
    std::vector<int> walls;
    int rho = -1;
    for (int i : ev->planes) {
      if (planes_[i].wall >= 0) walls.push_back(planes_[i].wall);
      if (planes_[i].rho >= 0) rho = planes_[i].rho;
    }
    Step st;
    st.y = ev->y;
    st.post = m;
    st.rho = rho;
    if (walls.empty()) {
      st.pre = m;
      steps.push_back(st);
      dfs(ev->y, m, depth, steps, out);
      steps.pop_back();
      return;
    }
    long long e = std::llabs(dot(planes_[ev->planes[0]].normal, m));
    const TruncatedSeries& G = crossing_function(walls, e);
    for (auto& [mu, a] : G.terms()) {
      if (depth + mu.depth > N_) continue;
      st.pre = sub(m, mu.dir);
      st.bend = !is_zero(mu.dir) || !mu.cls.is_zero();
      st.mu = mu;
      st.a = a;
      steps.push_back(st);
      dfs(ev->y, st.pre, depth + mu.depth, steps, out);
      steps.pop_back();
    }
  }

  const ThetaContext& ctx_;
  Vec m0_;
  int N_;
  std::vector<Plane> planes_;
  std::map<std::pair<std::vector<int>, long long>, TruncatedSeries> cache_;
};

// Candidate final velocities m0 + sum of wall term directions, with the
// least total depth needed to reach each.
std::vector<Vec> candidates(const WallStructure& ws, const Vec& m0, int N) {
  std::map<Vec, int> step;
  for (auto& w : ws.walls)
    for (auto& [m, c] : w.function.terms()) {
      if (is_zero(m.dir)) continue;
      if (m.depth < 1) throw Error("wall term of non-positive depth");
      auto it = step.find(m.dir);
      if (it == step.end() || m.depth < it->second) step[m.dir] = m.depth;
    }
  std::map<Vec, int> best{{m0, 0}};
  std::vector<Vec> frontier{m0};
  while (!frontier.empty()) {
    std::vector<Vec> nxt;
    for (auto& v : frontier) {
      int d = best[v];
      for (auto& [u, du] : step) {
        if (d + du > N) continue;
        Vec w = add(v, u);
        auto it = best.find(w);
        if (it == best.end() || d + du < it->second) {
          best[w] = d + du;
          nxt.push_back(w);
        }
      }
    }
    frontier = std::move(nxt);
  }
  std::vector<Vec> out;
  for (auto& [v, d] : best) out.push_back(v);
  return out;
}

BrokenLine replay(const ThetaContext& ctx, const Vec& m0, const QVec& p,
                  const std::vector<Step>& steps) {
  BrokenLine bl;
  bl.asymptotic = m0;
  bl.endpoint = p;
  int n = static_cast<int>(m0.size());
  (void)n;
  Monomial mono(m0, CurveClass());
  Q coeff = 1;
  QVec start;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    bl.segments.push_back({start, it->y, mono.dir, mono, coeff});
    if (it->bend) {
      mono = mono * it->mu;
      coeff *= it->a;
    }
    if (it->rho >= 0) {
      Vec nr = ctx.fan->codim1_normal(it->rho);
      long long s = dot(nr, neg(it->post));
      mono = kink_transport(*ctx.fan, *ctx.pl, mono, it->rho, s > 0 ? 1 : -1);
    }
    start = it->y;
  }
  bl.segments.push_back({start, p, mono.dir, mono, coeff});
  return bl;
}

std::vector<BrokenLine> enumerate_at(const ThetaContext& ctx, const Vec& m0, const QVec& p,
                                     int N, bool parallel) {
  Tracer probe(ctx, m0, N);
  probe.check_endpoint(p);
  auto cands = candidates(*ctx.ws, m0, N);
  std::vector<std::vector<std::vector<Step>>> found(cands.size());
  std::vector<std::exception_ptr> errs(cands.size());
  const long count = static_cast<long>(cands.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < count; ++i) {
    try {
      Tracer t(ctx, m0, N);
      t.run(p, cands[i], found[i]);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  std::vector<BrokenLine> out;
  for (auto& f : found)
    for (auto& steps : f) {
      BrokenLine bl = replay(ctx, m0, p, steps);
      if (bl.final_mono().order <= N && bl.final_mono().depth <= N) out.push_back(std::move(bl));
    }
  return out;
}

std::string coefficient_text(const TruncatedSeries& c) {
  std::vector<std::pair<Monomial, Q>> v(c.terms().begin(), c.terms().end());
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
    return Monomial::compare_graded(a.first, b.first) < 0;
  });
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    auto& [m, q] = v[i];
    std::string part;
    if (m.cls.is_zero()) part = q.get_str();
    else if (q == 1) part = class_bracket(m.cls);
    else if (q == -1) part = "-" + class_bracket(m.cls);
    else part = q.get_str() + "·" + class_bracket(m.cls);
    if (i == 0) s = part;
    else if (part[0] == '-') s += " - " + part.substr(1);
    else s += " + " + part;
  }
  return s;
}

std::string theta_symbol(int ray) { return "ϑ" + std::to_string(ray + 1); }

std::string theta_monomial(const std::vector<int>& rays, const std::vector<long long>& k) {
  std::string s;
  for (size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    if (!s.empty()) s += "·";
    s += theta_symbol(rays[i]);
    if (k[i] != 1) s += "^" + std::to_string(k[i]);
  }
  return s;
}

// Recognises expression = c0 t^b0 prod_i (1 + t^g_i ϑ_i)^{d_i}.
std::optional<std::string> factorised(const ThetaPolynomial& e, int rank, int N) {
  size_t r = e.rays.size();
  std::vector<long long> zero(r, 0);
  auto c0it = e.terms.find(zero);
  if (c0it == e.terms.end() || c0it->second.size() != 1) return std::nullopt;
  const auto& [m0, q0] = *c0it->second.terms().begin();
  std::vector<long long> d(r, 0);
  std::vector<CurveClass> g(r);
  for (size_t i = 0; i < r; ++i) {
    std::vector<long long> k(r, 0);
    k[i] = 1;
    auto it = e.terms.find(k);
    if (it == e.terms.end()) continue;
    if (it->second.size() != 1) return std::nullopt;
    const auto& [m, q] = *it->second.terms().begin();
    Q ratio = q / q0;
    if (ratio.get_den() != 1 || ratio <= 0) return std::nullopt;
    d[i] = ratio.get_num().get_si();
    g[i] = m.cls - m0.cls;
  }
  ThetaPolynomial guess;
  guess.rays = e.rays;
  guess.terms[zero] = c0it->second;
  for (size_t i = 0; i < r; ++i) {
    if (d[i] == 0) continue;
    std::map<std::vector<long long>, TruncatedSeries> next;
    for (auto& [k, c] : guess.terms)
      for (long long j = 0; j <= d[i]; ++j) {
        std::vector<long long> kk = k;
        kk[i] += j;
        Monomial shift(Vec(rank, 0), g[i].scaled(j));
        TruncatedSeries term = c.times_monomial(shift, Q(static_cast<long>(binomial(d[i], j))));
        auto [it, ins] = next.try_emplace(kk, TruncatedSeries(rank, N));
        it->second += term;
      }
    guess.terms.clear();
    for (auto& [k, c] : next)
      if (!c.is_zero()) guess.terms.emplace(k, c);
  }
  if (guess.terms != e.terms) return std::nullopt;
  std::string s;
  for (size_t i = 0; i < r; ++i) {
    if (d[i] == 0) continue;
    if (!s.empty()) s += " · ";
    s += "(1 + " + (g[i].is_zero() ? std::string() : class_bracket(g[i]) + "·") +
         theta_symbol(e.rays[i]) + ")";
    if (d[i] != 1) s += "^" + std::to_string(d[i]);
  }
  std::string tail = m0.cls.is_zero() ? std::string() : class_bracket(m0.cls);
  if (q0 != 1) tail = q0.get_str() + (tail.empty() ? "" : "·" + tail);
  if (!tail.empty()) s += (s.empty() ? "" : " · ") + tail;
  return s.empty() ? std::string("1") : s;
}

TruncatedSeries laurent_monomial(int rank, int N, const Vec& dir, const CurveClass& c = {},
                                 const Q& q = 1) {
  return TruncatedSeries::monomial(rank, N, Monomial(dir, c), q);
}

}  // namespace

int BrokenLine::bends() const {
  int b = 0;
  for (size_t i = 1; i < segments.size(); ++i)
    if (!(segments[i].mono == segments[i - 1].mono) || segments[i].coeff != segments[i - 1].coeff)
      if (segments[i].velocity != segments[i - 1].velocity ||
          segments[i].coeff != segments[i - 1].coeff ||
          segments[i].mono.depth != segments[i - 1].mono.depth)
        ++b;
  return b;
}

Monomial kink_transport(const Fan& fan, const PLFunction& pl, const Monomial& m, int rho,
                        int crossing_sign) {
  long long np = dot(fan.codim1_normal(rho), m.dir);
  if (np == 0) return m;
  return Monomial(m.dir, m.cls + pl.kinks()[rho].scaled(-crossing_sign * np));
}

QVec default_endpoint(const Fan& fan, int base_cone, int seed) {
  static const long dens[] = {7, 11, 13, 17, 19, 23, 29};
  auto gens = fan.maximal_cone(base_cone).gens();
  int n = static_cast<int>(gens.size());
  QVec c(n);
  c[0] = 1;
  for (int i = 1; i < n; ++i) {
    long den = dens[(i - 1) % 7] + (i == n - 1 ? seed : 0);
    c[i] = 1 + Q(1, den);
  }
  if (n == 1) c[0] = 1 + Q(1, 7 + seed);
  QVec p(n, 0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) p[i] += c[k] * Q(static_cast<long>(gens[k][i]));
  return p;
}

QVec perturb_endpoint(const QVec& p) {
  QVec q = p;
  mpz_class b = q.back().get_den();
  q.back() += Q(1) / Q(b * (b + 1));
  return q;
}

std::vector<BrokenLine> enumerate_broken_lines(const ThetaContext& ctx, const Vec& m0,
                                               const QVec& p, int N, const ThetaOptions& opt,
                                               QVec* used) {
  if (!ctx.ws) throw Error("theta context without wall structure");
  if (static_cast<int>(m0.size()) != ctx.ws->rank || static_cast<int>(p.size()) != ctx.ws->rank)
    throw Error("dimension mismatch in broken line enumeration");
  try {
    auto out = enumerate_at(ctx, m0, p, N, opt.parallel);
    if (used) *used = p;
    return out;
  } catch (const NonGenericError&) {
    if (!opt.retry) throw NonGenericError("endpoint not generic");
  }
  QVec q = perturb_endpoint(p);
  try {
    auto out = enumerate_at(ctx, m0, q, N, opt.parallel);
    if (used) *used = q;
    return out;
  } catch (const NonGenericError&) {
    throw NonGenericError("endpoint not generic");
  }
}

TruncatedSeries theta(const ThetaContext& ctx, const Vec& m0, const QVec& p, int N,
                      const ThetaOptions& opt, QVec* used) {
  TruncatedSeries s(ctx.ws->rank, N);
  for (auto& bl : enumerate_broken_lines(ctx, m0, p, N, opt, used))
    s.add_term(bl.final_mono(), bl.final_coeff());
  s.require_integral("theta function");
  return s;
}

std::string class_bracket(const CurveClass& c) { return "t^[" + c.to_string() + "]"; }

std::string ThetaPolynomial::to_string() const {
  std::vector<std::pair<std::vector<long long>, const TruncatedSeries*>> v;
  for (auto& [k, c] : terms) v.emplace_back(k, &c);
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
    long long da = 0, db = 0;
    for (auto x : a.first) da += x;
    for (auto x : b.first) db += x;
    return da != db ? da < db : a.first < b.first;
  });
  std::string s;
  for (auto& [k, c] : v) {
    std::string mono = theta_monomial(rays, k);
    std::string coef = coefficient_text(*c);
    std::string part;
    if (mono.empty()) part = coef;
    else if (coef == "1") part = mono;
    else if (c->size() > 1) part = "(" + coef + ")·" + mono;
    else part = coef + "·" + mono;
    s += (s.empty() ? "" : " + ") + part;
  }
  return s.empty() ? "0" : s;
}

ThetaPolynomial express_in_thetas(const TruncatedSeries& g, const Fan& fan,
                                  const std::vector<int>& rays,
                                  const std::vector<TruncatedSeries>& thetas) {
  if (rays.size() != thetas.size()) throw Error("one theta per ray required");
  int rank = g.rank(), N = g.cutoff();
  ThetaPolynomial out;
  out.rays = rays;
  std::map<std::vector<long long>, TruncatedSeries> powers;
  auto product = [&](const std::vector<long long>& k) -> const TruncatedSeries& {
    auto it = powers.find(k);
    if (it != powers.end()) return it->second;
    TruncatedSeries p = TruncatedSeries::one(rank, N);
    for (size_t i = 0; i < k.size(); ++i)
      if (k[i]) p = p * thetas[i].truncated(N).power(k[i]);
    return powers.emplace(k, p).first->second;
  };
  auto leading = [](const TruncatedSeries& s) {
    auto best = s.terms().begin();
    for (auto it = s.terms().begin(); it != s.terms().end(); ++it)
      if (Monomial::compare_graded(it->first, best->first) < 0) best = it;
    return best;
  };
  TruncatedSeries rem = g;
  for (int iter = 0; !rem.is_zero(); ++iter) {
    if (iter > 100000) throw Error("not theta-expressible");
    auto lead = leading(rem);
    const Monomial mu = lead->first;
    const Q c = lead->second;
    std::vector<long long> k(rays.size(), 0);
    if (!is_zero(mu.dir)) {
      int cone = fan.find_cone(to_qvec(mu.dir));
      if (cone < 0) throw Error("not theta-expressible");
      auto gens = fan.maximal_cone(cone).gens();
      auto coords = *span_coords(gens, to_qvec(mu.dir));
      for (size_t j = 0; j < gens.size(); ++j) {
        if (coords[j] == 0) continue;
        if (coords[j].get_den() != 1 || coords[j] < 0) throw Error("not theta-expressible");
        int ray = fan.ray_index(gens[j]);
        auto pos = std::find(rays.begin(), rays.end(), ray);
        if (pos == rays.end()) throw Error("not theta-expressible");
        k[pos - rays.begin()] = coords[j].get_num().get_si();
      }
    }
    const TruncatedSeries& T = product(k);
    if (T.is_zero()) throw Error("not theta-expressible");
    auto tl = leading(T);
    if (tl->first.dir != mu.dir) throw Error("not theta-expressible");
    Q ratio = c / tl->second;
    Monomial shift(Vec(rank, 0), mu.cls - tl->first.cls);
    TruncatedSeries sub = T.times_monomial(shift, ratio);
    if (sub.coefficient(mu) != c) throw Error("not theta-expressible");
    rem = rem - sub;
    auto [it, ins] = out.terms.try_emplace(k, TruncatedSeries(rank, N));
    it->second.add_term(shift, ratio);
    if (it->second.is_zero()) out.terms.erase(it);
  }
  return out;
}

MirrorPresentation mirror_presentation(const BlowupData& bd, const WallStructure& heart,
                                       const QVec& p_in, int N, std::vector<int> relation,
                                       const ThetaOptions& opt) {
  const Fan& fan = bd.fan;
  int r = static_cast<int>(fan.rays().size());
  if (relation.empty())
    for (int i = 0; i < r; ++i) relation.push_back(i);
  Vec sum(fan.rank(), 0);
  for (int i : relation) {
    if (i < 0 || i >= r) throw Error("relation ray out of range");
    sum = add(sum, fan.rays()[i]);
  }
  if (!is_zero(sum)) throw Error("relation rays do not sum to zero");
  ThetaContext ctx{&heart, &fan, &bd.phi0};
  QVec p = p_in.empty() ? default_endpoint(fan, bd.phi0.base_cone()) : p_in;
  MirrorPresentation mp;
  ThetaOptions inner = opt;
  inner.retry = false;
  inner.parallel = false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<TruncatedSeries> th(r);
    std::vector<std::exception_ptr> errs(r);
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (int i = 0; i < r; ++i) {
      try {
        th[i] = theta(ctx, fan.rays()[i], p, N, inner);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
    bool nongeneric = false;
    for (auto& e : errs) {
      if (!e) continue;
      try {
        std::rethrow_exception(e);
      } catch (const NonGenericError&) {
        nongeneric = true;
      }
    }
    if (!nongeneric) {
      mp.thetas = std::move(th);
      break;
    }
    if (attempt == 1 || !opt.retry) throw NonGenericError("endpoint not generic");
    p = perturb_endpoint(p);
  }
  mp.endpoint = p;
  for (int i = 0; i < r; ++i) mp.generators.push_back(theta_symbol(i));
  mp.rays = relation;
  TruncatedSeries g = TruncatedSeries::one(fan.rank(), N);
  for (int i : relation) g = g * mp.thetas[i];
  std::vector<int> all(r);
  for (int i = 0; i < r; ++i) all[i] = i;
  mp.expression = express_in_thetas(g, fan, all, mp.thetas);
  std::string lhs;
  for (int i : relation) lhs += (lhs.empty() ? "" : "·") + theta_symbol(i);
  auto f = factorised(mp.expression, fan.rank(), N);
  mp.relation = lhs + " = " + (f ? *f : mp.expression.to_string());
  return mp;
}

bool aak_check(const BlowupData& bd, const WallStructure& heart_in, int N, std::string* report) {
  if (bd.centers.size() != 1 || bd.centers[0].components.size() != 1)
    throw Error("AAK comparison defined for a single hypersurface");
  const Fan& fan = bd.fan;
  int R = fan.rank(), n = R - 1;
  Vec minus(R, 0), plus(R, 0);
  minus[0] = -1;
  plus[0] = 1;
  const Center& c = bd.centers[0];
  if (fan.rays()[c.ray] != minus || fan.ray_index(plus) < 0)
    throw Error("AAK comparison needs the product fan with the center on (-1,0)");
  const CenterComponent& comp = c.components[0];
  CurveClass E = CurveClass::gen(comp.exceptional_gen);

  // The fan of V and the kinks of phi_H, read off the product fan.
  std::vector<Vec> vrays;
  std::vector<int> vray_of(fan.rays().size(), -1);
  for (size_t i = 0; i < fan.rays().size(); ++i) {
    const Vec& m = fan.rays()[i];
    if (m == minus || m == plus) continue;
    if (m[0] != 0) throw Error("AAK comparison needs the product fan");
    vray_of[i] = static_cast<int>(vrays.size());
    vrays.emplace_back(m.begin() + 1, m.end());
  }
  std::vector<std::vector<int>> vcones;
  for (auto& cone : fan.maximal()) {
    if (std::find(cone.begin(), cone.end(), c.ray) == cone.end()) continue;
    std::vector<int> vc;
    for (int id : cone)
      if (id != c.ray) vc.push_back(vray_of[id]);
    vcones.push_back(vc);
  }
  Fan V(vrays, vcones);
  std::vector<long long> kappa(V.codim1().size(), 0);
  for (size_t t = 0; t < V.codim1().size(); ++t) {
    std::vector<int> ids{c.ray};
    for (int vid : V.codim1()[t])
      for (size_t i = 0; i < vray_of.size(); ++i)
        if (vray_of[i] == vid) ids.push_back(static_cast<int>(i));
    int rho = fan.codim1_index(ids);
    auto it = comp.intersections.find(rho);
    if (it != comp.intersections.end()) kappa[t] = it->second;
  }
  QVec p = default_endpoint(fan, bd.phi0.base_cone());
  QVec pv(p.begin() + 1, p.end());
  if (p[0] == 0) throw Error("AAK endpoint must have nonzero first coordinate");

  // phi_H(m_i) from the codim-1 cones met by p + s m_i.
  auto phi_h = [&](const Vec& m) {
    long long total = 0;
    for (size_t t = 0; t < V.codim1().size(); ++t) {
      Cone tau = V.codim1_cone(static_cast<int>(t));
      Vec nt = normal_covector(tau.gens());
      long long nm = dot(nt, m);
      if (nm == 0) continue;
      Q s = -dot(nt, pv) / Q(static_cast<long>(nm));
      if (s <= 0) continue;
      QVec y = along(pv, s, m);
      if (tau.contains(y)) total += kappa[t] * std::llabs(nm);
    }
    return total;
  };

  WallStructure heart = exceptional_restriction(heart_in);
  ThetaContext ctx{&heart, nullptr, nullptr};
  ThetaOptions opt;
  opt.retry = false;
  auto th = [&](const Vec& m) { return theta(ctx, m, p, N, opt); };

  // Psi: z^{(a,m)} -> z^{(0,m)} (1 + t^{-E} z^{(-1,0)})^a.
  TruncatedSeries u = TruncatedSeries::binomial(R, N, Monomial(minus, -E));
  auto psi = [&](const Vec& dir, const CurveClass& cls) {
    Vec rest = dir;
    rest[0] = 0;
    return u.power(dir[0]).times_monomial(Monomial(rest, cls));
  };
  std::ostringstream rep;
  bool ok = true;
  auto record = [&](const std::string& name, const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
    bool eq = lhs == rhs;
    ok = ok && eq;
    rep << name << ": " << (eq ? "ok" : "MISMATCH") << "  " << lhs.pretty() << "  vs  "
        << rhs.pretty() << "\n";
  };
  TruncatedSeries theta0 = th(minus);
  record("Psi(v0) = 1 + t^-E theta0", psi(plus, {}),
         TruncatedSeries::one(R, N) + theta0.times_monomial(Monomial(Vec(R, 0), -E)));
  for (size_t i = 0; i < fan.rays().size(); ++i) {
    int vi = vray_of[i];
    if (vi < 0) continue;
    Vec lifted = fan.rays()[i];
    lifted[0] = phi_h(vrays[vi]);
    record("Psi(v" + std::to_string(vi + 1) + ") = theta" + std::to_string(vi + 1),
           psi(lifted, {}), th(fan.rays()[i]));
  }
  // w0' = (-t^E + t^E v0)^{-1}; its image is the inverse of a monomial.
  TruncatedSeries inner = laurent_monomial(R, N, Vec(R, 0), E, -1) + psi(plus, E);
  TruncatedSeries w0;
  if (inner.size() == 1 && abs(inner.terms().begin()->second) == 1) {
    auto& [m, q] = *inner.terms().begin();
    w0 = laurent_monomial(R, N, neg(m.dir), -m.cls, 1 / q);
  }
  record("Psi(w0') = theta0'", w0, th(plus));
  (void)n;
  if (report) *report = rep.str();
  return ok;
}

std::string thetas_json(const Fan& fan, const std::vector<TruncatedSeries>& thetas,
                        const QVec& endpoint) {
  nlohmann::ordered_json j;
  std::vector<std::string> pe;
  for (auto& q : endpoint) pe.push_back(q.get_str());
  j["endpoint"] = pe;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (size_t i = 0; i < thetas.size(); ++i) {
    nlohmann::ordered_json o;
    o["symbol"] = theta_symbol(static_cast<int>(i));
    o["direction"] = fan.rays()[i];
    o["series"] = thetas[i].canonical();
    o["pretty"] = thetas[i].pretty();
    arr.push_back(o);
  }
  j["thetas"] = arr;
  return j.dump(2) + "\n";
}

}  // namespace hs
