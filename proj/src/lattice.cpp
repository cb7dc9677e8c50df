#include "heartscatter/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "heartscatter/error.hpp"

namespace hs {

long long dot(const Vec& a, const Vec& b) {
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Q dot(const Vec& a, const QVec& b) {
  Q s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += Q(static_cast<long>(a[i])) * b[i];
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec neg(const Vec& a) { return scale(a, -1); }

Vec scale(const Vec& a, long long k) {
  Vec r = a;
  for (auto& x : r) x *= k;
  return r;
}

bool is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](long long x) { return x == 0; });
}

Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

long long det3(const Vec& a, const Vec& b, const Vec& c) { return dot(a, cross(b, c)); }

Vec primitive(const Vec& v) {
  long long g = 0;
  for (long long x : v) g = std::gcd(g, x);
  if (g == 0) throw Error("zero has no primitive");
  Vec r = v;
  for (auto& x : r) x /= g;
  return r;
}

// Row-reduces a rational matrix in place; returns pivot columns.
static std::vector<int> row_reduce(std::vector<QVec>& m, int ncols) {
  std::vector<int> pivots;
  size_t r = 0;
  for (int c = 0; c < ncols && r < m.size(); ++c) {
    size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Q inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Q f = m[i][c];
      for (size_t j = 0; j < m[i].size(); ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank_of(const std::vector<Vec>& vs) {
  if (vs.empty()) return 0;
  std::vector<QVec> m;
  for (auto& v : vs) m.push_back(to_qvec(v));
  return static_cast<int>(row_reduce(m, static_cast<int>(vs[0].size())).size());
}

std::optional<QVec> span_coords(const std::vector<Vec>& gens, const QVec& v) {
  size_t n = v.size(), k = gens.size();
  if (k == 0) {
    for (auto& x : v)
      if (x != 0) return std::nullopt;
    return QVec{};
  }
  std::vector<QVec> m(n, QVec(k + 1));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < k; ++j) m[i][j] = static_cast<long>(gens[j][i]);
    m[i][k] = v[i];
  }
  auto piv = row_reduce(m, static_cast<int>(k + 1));
  if (!piv.empty() && piv.back() == static_cast<int>(k)) return std::nullopt;
  QVec sol(k, 0);
  for (size_t r = 0; r < piv.size(); ++r) sol[piv[r]] = m[r][k];
  return sol;
}

Cone::Cone(std::vector<Vec> gens) : gens_(std::move(gens)) {
  for (auto& g : gens_)
    if (primitive(g) != g) throw Error("cone generator " + vec_to_string(g) + " is not primitive");
  if (rank_of(gens_) != static_cast<int>(gens_.size()))
    throw Error("cone generators are linearly dependent");
  std::sort(gens_.begin(), gens_.end());
}

bool Cone::contains(const Vec& v) const { return contains(to_qvec(v)); }

bool Cone::contains(const QVec& v) const {
  auto c = span_coords(gens_, v);
  if (!c) return false;
  return std::all_of(c->begin(), c->end(), [](const Q& x) { return x >= 0; });
}

bool Cone::contains_in_relative_interior(const QVec& v) const {
  auto c = span_coords(gens_, v);
  if (!c) return false;
  return std::all_of(c->begin(), c->end(), [](const Q& x) { return x > 0; });
}

bool cone_contains(const Cone& c, const Vec& v) { return c.contains(v); }

static Vec clear_denominators(const QVec& q) {
  mpz_class l = 1;
  for (auto& x : q) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Vec r;
  for (auto& x : q) {
    mpz_class v = x.get_num() * (l / x.get_den());
    r.push_back(v.get_si());
  }
  return r;
}

Vec normal_covector(const std::vector<Vec>& span) {
  if (span.empty()) throw Error("normal of an empty span");
  int n = static_cast<int>(span[0].size());
  std::vector<QVec> m;
  for (auto& v : span) m.push_back(to_qvec(v));
  auto piv = row_reduce(m, n);
  if (static_cast<int>(piv.size()) != n - 1) throw Error("span does not have rank n-1");
  int free_col = 0;
  while (std::find(piv.begin(), piv.end(), free_col) != piv.end()) ++free_col;
  QVec k(n, 0);
  k[free_col] = 1;
  for (size_t r = 0; r < piv.size(); ++r) k[piv[r]] = -m[r][free_col];
  Vec v = primitive(clear_denominators(k));
  for (long long x : v) {
    if (x == 0) continue;
    if (x < 0) v = neg(v);
    break;
  }
  return v;
}

using IMat = std::vector<std::vector<long long>>;

IMat hermite_normal_form(IMat m) {
  if (m.empty()) return m;
  size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    // Euclid on column c among rows r..end.
    for (;;) {
      size_t best = rows;
      for (size_t i = r; i < rows; ++i)
        if (m[i][c] != 0 && (best == rows || std::llabs(m[i][c]) < std::llabs(m[best][c])))
          best = i;
      if (best == rows) break;
      std::swap(m[r], m[best]);
      bool done = true;
      for (size_t i = r + 1; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        long long q = m[i][c] / m[r][c];
        for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0)
      for (auto& x : m[r]) x = -x;
    for (size_t i = 0; i < r; ++i) {
      long long q = m[i][c] / m[r][c];
      if (m[i][c] - q * m[r][c] < 0) --q;
      for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
    }
    ++r;
  }
  return m;
}

static Q qdet(std::vector<QVec> m) {
  size_t n = m.size();
  Q d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      Q f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

RayProjection::RayProjection(const Vec& ray) : ray_(ray) {
  if (primitive(ray) != ray) throw Error("projection ray must be primitive");
  size_t n = ray.size();
  if (n < 2) throw Error("projection needs rank at least 2");
  // Unimodular U with U*ray = e_1, by Euclid on coordinate pairs.
  IMat U(n, Vec(n, 0));
  for (size_t i = 0; i < n; ++i) U[i][i] = 1;
  Vec w = ray;
  for (size_t i = n - 1; i >= 1; --i) {
    while (w[i] != 0) {
      long long q = w[0] / w[i];
      w[0] -= q * w[i];
      for (size_t j = 0; j < n; ++j) U[0][j] -= q * U[i][j];
      std::swap(w[0], w[i]);
      std::swap(U[0], U[i]);
    }
  }
  if (w[0] < 0) {
    w[0] = -w[0];
    for (auto& x : U[0]) x = -x;
  }
  IMat P(U.begin() + 1, U.end());
  rows_ = hermite_normal_form(P);
  IMat full;
  full.push_back(U[0]);
  for (auto& r : rows_) full.push_back(r);
  std::vector<QVec> qf;
  for (auto& r : full) qf.push_back(to_qvec(r));
  if (qdet(qf) < 0) {
    for (auto& x : rows_.back()) x = -x;
    for (auto& x : full.back()) x = -x;
  }
  // Inverse of `full`; its columns are ray, b_1, ..., b_{n-1}.
  std::vector<QVec> aug(n, QVec(2 * n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = static_cast<long>(full[i][j]);
    aug[i][n + i] = 1;
  }
  row_reduce(aug, static_cast<int>(n));
  basis_.assign(n - 1, Vec(n, 0));
  for (size_t j = 1; j < n; ++j)
    for (size_t i = 0; i < n; ++i) basis_[j - 1][i] = aug[i][n + j].get_num().get_si();
}

Vec RayProjection::project(const Vec& v) const {
  Vec r;
  for (auto& row : rows_) r.push_back(dot(row, v));
  return r;
}

QVec RayProjection::project(const QVec& v) const {
  QVec r;
  for (auto& row : rows_) r.push_back(dot(row, v));
  return r;
}

Vec RayProjection::induced_covector(const Vec& n) const {
  Vec r;
  for (auto& b : basis_) r.push_back(dot(n, b));
  return r;
}

std::vector<Vec> project_along(const Vec& ray, const std::vector<Vec>& vs) {
  RayProjection p(ray);
  std::vector<Vec> out;
  for (auto& v : vs) out.push_back(p.project(v));
  return out;
}

Fan::Fan(std::vector<Vec> rays, std::vector<std::vector<int>> maximal)
    : rays_(std::move(rays)), maximal_(std::move(maximal)) {
  if (rays_.empty()) throw Error("fan has no rays");
  rank_ = static_cast<int>(rays_[0].size());
  if (rank_ < 2) throw Error("fan rank must be at least 2");
  for (auto& r : rays_) {
    if (static_cast<int>(r.size()) != rank_) throw Error("ray dimension mismatch");
    if (primitive(r) != r) throw Error("ray " + vec_to_string(r) + " is not primitive");
  }
  std::map<std::vector<int>, std::vector<int>> faces;
  for (size_t c = 0; c < maximal_.size(); ++c) {
    auto& ids = maximal_[c];
    if (static_cast<int>(ids.size()) != rank_) throw Error("maximal cone is not full dimensional");
    for (int id : ids)
      if (id < 0 || id >= static_cast<int>(rays_.size())) throw Error("ray index out of range");
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error("repeated ray in cone");
    maximal_cone(static_cast<int>(c));  // validates independence
    for (int skip = 0; skip < rank_; ++skip) {
      std::vector<int> f;
      for (int j = 0; j < rank_; ++j)
        if (j != skip) f.push_back(ids[j]);
      faces[f].push_back(static_cast<int>(c));
    }
  }
  for (auto& [f, cs] : faces) {
    if (cs.size() != 2) throw Error("fan not complete");
    std::vector<Vec> span;
    for (int id : f) span.push_back(rays_[id]);
    Vec nrm = rank_ == 1 ? Vec{1} : normal_covector(span);
    auto side = [&](int c) {
      for (int id : maximal_[c])
        if (std::find(f.begin(), f.end(), id) == f.end()) return dot(nrm, rays_[id]);
      return 0LL;
    };
    long long s0 = side(cs[0]), s1 = side(cs[1]);
    if ((s0 > 0) == (s1 > 0)) throw Error("fan not complete");
    codim1_.push_back(f);
    adjacent_.emplace_back(s1 > 0 ? cs[0] : cs[1], s1 > 0 ? cs[1] : cs[0]);
  }
  // Generic sample points must lie in exactly one maximal cone.
  std::vector<Q> shift;
  static const long primes[] = {97, 89, 83, 79, 73, 71, 67, 61};
  for (int i = 0; i < rank_; ++i) shift.emplace_back(1, primes[i % 8] * (i / 8 + 1));
  Vec idx(rank_, -3);
  for (;;) {
    QVec p(rank_);
    for (int i = 0; i < rank_; ++i) p[i] = Q(static_cast<long>(idx[i])) + shift[i];
    int count = 0;
    for (size_t c = 0; c < maximal_.size(); ++c)
      if (maximal_cone(static_cast<int>(c)).contains(p)) ++count;
    if (count != 1) throw Error("fan not complete");
    int k = 0;
    while (k < rank_ && ++idx[k] > 3) idx[k++] = -3;
    if (k == rank_) break;
  }
}

Cone Fan::maximal_cone(int i) const {
  std::vector<Vec> g;
  for (int id : maximal_[i]) g.push_back(rays_[id]);
  return Cone(g);
}

Cone Fan::codim1_cone(int i) const {
  std::vector<Vec> g;
  for (int id : codim1_[i]) g.push_back(rays_[id]);
  return Cone(g);
}

Vec Fan::codim1_normal(int i) const {
  std::vector<Vec> span;
  for (int id : codim1_[i]) span.push_back(rays_[id]);
  Vec n = normal_covector(span);
  for (int id : maximal_[adjacent_[i].second])
    if (dot(n, rays_[id]) != 0) return dot(n, rays_[id]) > 0 ? n : neg(n);
  return n;
}

int Fan::ray_index(const Vec& r) const {
  for (size_t i = 0; i < rays_.size(); ++i)
    if (rays_[i] == r) return static_cast<int>(i);
  return -1;
}

int Fan::codim1_index(std::vector<int> ids) const {
  std::sort(ids.begin(), ids.end());
  for (size_t i = 0; i < codim1_.size(); ++i)
    if (codim1_[i] == ids) return static_cast<int>(i);
  return -1;
}

int Fan::find_cone(const QVec& p) const {
  for (size_t c = 0; c < maximal_.size(); ++c)
    if (maximal_cone(static_cast<int>(c)).contains(p)) return static_cast<int>(c);
  return -1;
}

std::vector<int> Fan::cones_containing(const QVec& p) const {
  std::vector<int> out;
  for (size_t c = 0; c < maximal_.size(); ++c)
    if (maximal_cone(static_cast<int>(c)).contains(p)) out.push_back(static_cast<int>(c));
  return out;
}

CurveClass ClassCovector::value(const Vec& m) const {
  CurveClass r;
  for (size_t k = 0; k < coeff.size(); ++k)
    if (m[k] != 0) r += coeff[k].scaled(m[k]);
  return r;
}

PLFunction::PLFunction(const Fan& fan, int base_cone, std::vector<CurveClass> kinks)
    : base_(base_cone), kinks_(std::move(kinks)) {
  int nc = static_cast<int>(fan.maximal().size());
  if (base_ < 0 || base_ >= nc) throw Error("base cone out of range");
  if (kinks_.size() != fan.codim1().size()) throw Error("one kink per codimension-one cone required");
  std::vector<std::optional<ClassCovector>> rep(nc);
  rep[base_] = ClassCovector{std::vector<CurveClass>(fan.rank())};
  std::deque<int> queue{base_};
  auto step = [&](const ClassCovector& from, const Vec& n_far, const CurveClass& k) {
    ClassCovector r = from;
    for (int i = 0; i < fan.rank(); ++i)
      if (n_far[i] != 0) r.coeff[i] += k.scaled(n_far[i]);
    return r;
  };
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (size_t i = 0; i < fan.codim1().size(); ++i) {
      auto [a, b] = fan.adjacent(static_cast<int>(i));
      if (a != c && b != c) continue;
      int other = a == c ? b : a;
      Vec n = fan.codim1_normal(static_cast<int>(i));
      if (other == a) n = neg(n);
      ClassCovector next = step(*rep[c], n, kinks_[i]);
      if (!rep[other]) {
        rep[other] = next;
        queue.push_back(other);
      } else if (!(*rep[other] == next)) {
        throw Error("kink data is not path independent");
      }
    }
  }
  for (auto& r : rep) {
    if (!r) throw Error("fan not complete");
    reps_.push_back(*r);
  }
}

CurveClass PLFunction::value(const Fan& fan, const Vec& m) const {
  int c = fan.find_cone(to_qvec(m));
  if (c < 0) throw Error("point outside the fan");
  return value_on(c, m);
}

Fan projective_space_fan(int n) {
  std::vector<Vec> rays;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    rays.push_back(e);
  }
  rays.push_back(Vec(n, -1));
  std::vector<std::vector<int>> cones;
  std::vector<int> orthant(n);
  std::iota(orthant.begin(), orthant.end(), 0);
  cones.push_back(orthant);
  for (int skip = 0; skip < n; ++skip) {
    std::vector<int> c;
    for (int i = 0; i <= n; ++i)
      if (i != skip) c.push_back(i);
    cones.push_back(c);
  }
  return Fan(rays, cones);
}

PLFunction projective_space_pl(const Fan& fan, int base_cone, const CurveClass& kink) {
  return PLFunction(fan, base_cone, std::vector<CurveClass>(fan.codim1().size(), kink));
}

}  // namespace hs
