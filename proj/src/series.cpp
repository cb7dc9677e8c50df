#include "heartscatter/series.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include "heartscatter/error.hpp"

namespace hs {

std::string vec_to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

std::string q_to_string(const Q& q) { return q.get_str(); }

QVec to_qvec(const Vec& v) {
  QVec out;
  out.reserve(v.size());
  for (long long x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

Monomial::Monomial(Vec d, CurveClass c)
    : dir(std::move(d)), cls(std::move(c)), order(cls.order()), depth(cls.depth()) {}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m;
  m.dir = dir;
  for (size_t i = 0; i < m.dir.size(); ++i) m.dir[i] += o.dir[i];
  m.cls = cls + o.cls;
  m.order = order + o.order;
  m.depth = depth + o.depth;
  return m;
}

Monomial Monomial::pow(long long k) const {
  Monomial m;
  m.dir = dir;
  for (auto& x : m.dir) x *= k;
  m.cls = cls.scaled(k);
  m.order = static_cast<int>(order * k);
  m.depth = static_cast<int>(depth * k);
  return m;
}

int Monomial::compare_graded(const Monomial& a, const Monomial& b) {
  if (a.order != b.order) return a.order < b.order ? -1 : 1;
  if (a.depth != b.depth) return a.depth < b.depth ? -1 : 1;
  if (a.dir != b.dir) return a.dir < b.dir ? -1 : 1;
  return CurveClass::compare_by_name(a.cls, b.cls);
}

int Monomial::compare_leading(const Monomial& a, const Monomial& b) {
  if (a.depth != b.depth) return a.depth < b.depth ? -1 : 1;
  if (a.order != b.order) return a.order < b.order ? -1 : 1;
  if (a.dir != b.dir) return a.dir < b.dir ? -1 : 1;
  return CurveClass::compare_by_name(a.cls, b.cls);
}

TruncatedSeries TruncatedSeries::one(int rank, int cutoff) {
  return monomial(rank, cutoff, Monomial(Vec(rank, 0), CurveClass()));
}

TruncatedSeries TruncatedSeries::monomial(int rank, int cutoff, const Monomial& m,
                                          const Q& c) {
  TruncatedSeries s(rank, cutoff);
  s.add_term(m, c);
  return s;
}

TruncatedSeries TruncatedSeries::binomial(int rank, int cutoff, const Monomial& m,
                                          const Q& c) {
  TruncatedSeries s = one(rank, cutoff);
  s.add_term(m, c);
  return s;
}

bool TruncatedSeries::is_one() const {
  if (terms_.size() != 1) return false;
  auto& [m, c] = *terms_.begin();
  return c == 1 && m.cls.is_zero() &&
         std::all_of(m.dir.begin(), m.dir.end(), [](long long x) { return x == 0; });
}

Q TruncatedSeries::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Q(0) : it->second;
}

void TruncatedSeries::add_term(const Monomial& m, const Q& c) {
  if (c == 0 || !keeps(m)) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  TruncatedSeries r = *this;
  r += o;
  return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  TruncatedSeries r = *this;
  for (auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

TruncatedSeries TruncatedSeries::operator-() const { return scaled(-1); }

TruncatedSeries TruncatedSeries::scaled(const Q& c) const {
  TruncatedSeries r(rank_, cutoff_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& [m, v] : r.terms_) v *= c;
  return r;
}

TruncatedSeries operator*(const Q& c, const TruncatedSeries& s) { return s.scaled(c); }

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  if (cutoff_ != o.cutoff_) throw Error("mismatched cutoffs in product");
  if (rank_ != o.rank_) throw Error("mismatched ranks in product");
  TruncatedSeries r(rank_, cutoff_);
  for (auto& [a, ca] : terms_)
    for (auto& [b, cb] : o.terms_) {
      if (a.order + b.order > cutoff_ || a.depth + b.depth > cutoff_) continue;
      r.add_term(a * b, ca * cb);
    }
  return r;
}

TruncatedSeries TruncatedSeries::times_monomial(const Monomial& m, const Q& c) const {
  TruncatedSeries r(rank_, cutoff_);
  for (auto& [a, ca] : terms_) r.add_term(a * m, ca * c);
  return r;
}

TruncatedSeries TruncatedSeries::truncated(int cutoff) const {
  TruncatedSeries r(rank_, cutoff);
  for (auto& [m, c] : terms_) r.add_term(m, c);
  return r;
}

static bool nilpotent(const Monomial& m) { return m.order >= 1 || m.depth >= 1; }

TruncatedSeries TruncatedSeries::power(long long k) const {
  if (k < 0) return inverse().power(-k);
  TruncatedSeries result = one(rank_, cutoff_), base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

static constexpr int kSeriesIterCap = 100000;

TruncatedSeries TruncatedSeries::inverse() const {
  const Monomial* lead = nullptr;
  Q lead_c;
  for (auto& [m, c] : terms_) {
    if (nilpotent(m)) continue;
    if (lead) throw Error("not a unit");
    lead = &m;
    lead_c = c;
  }
  if (!lead || lead_c != 1 ||
      std::any_of(lead->dir.begin(), lead->dir.end(), [](long long x) { return x != 0; }))
    throw Error("not a unit");
  Monomial shift = lead->pow(-1);
  TruncatedSeries g = times_monomial(shift) - one(rank_, cutoff_);
  TruncatedSeries sum = one(rank_, cutoff_), p = one(rank_, cutoff_);
  TruncatedSeries mg = -g;
  for (int j = 1; j < kSeriesIterCap; ++j) {
    p = p * mg;
    if (p.is_zero()) return sum.times_monomial(shift);
    sum += p;
  }
  throw Error("inverse did not terminate");
}

static void require_leading_one(const TruncatedSeries& f, const char* what) {
  bool found = false;
  for (auto& [m, c] : f.terms()) {
    if (nilpotent(m)) continue;
    bool zero_dir = std::all_of(m.dir.begin(), m.dir.end(), [](long long x) { return x == 0; });
    if (found || !zero_dir || !m.cls.is_zero() || c != 1) throw Error(what);
    found = true;
  }
  if (!found) throw Error(what);
}

TruncatedSeries TruncatedSeries::log_unit() const {
  require_leading_one(*this, "log of a series with constant term not 1");
  TruncatedSeries g = *this - one(rank_, cutoff_);
  TruncatedSeries sum(rank_, cutoff_), p = one(rank_, cutoff_);
  for (int j = 1; j < kSeriesIterCap; ++j) {
    p = p * g;
    if (p.is_zero()) return sum;
    sum += p.scaled(Q(j % 2 ? 1 : -1, j));
  }
  throw Error("log did not terminate");
}

TruncatedSeries TruncatedSeries::exp_nilpotent() const {
  for (auto& [m, c] : terms_)
    if (!nilpotent(m)) throw Error("exp of a non-nilpotent series");
  TruncatedSeries sum = one(rank_, cutoff_), p = one(rank_, cutoff_);
  for (int j = 1; j < kSeriesIterCap; ++j) {
    p = (p * *this).scaled(Q(1, j));
    if (p.is_zero()) return sum;
    sum += p;
  }
  throw Error("exp did not terminate");
}

TruncatedSeries TruncatedSeries::order_part(int k) const {
  TruncatedSeries r(rank_, cutoff_);
  for (auto& [m, c] : terms_)
    if (m.order == k) r.terms_.emplace(m, c);
  return r;
}

int TruncatedSeries::min_order() const {
  int best = INT_MAX;
  for (auto& [m, c] : terms_) {
    bool constant = m.cls.is_zero() &&
                    std::all_of(m.dir.begin(), m.dir.end(), [](long long x) { return x == 0; });
    if (!constant) best = std::min(best, m.order);
  }
  return best;
}

bool TruncatedSeries::integral() const {
  for (auto& [m, c] : terms_)
    if (c.get_den() != 1) return false;
  return true;
}

void TruncatedSeries::require_integral(const std::string& where) const {
  if (!integral()) throw Error("non-integral coefficient in " + where);
}

static std::vector<std::pair<Monomial, Q>> sorted_terms(const TruncatedSeries& s) {
  std::vector<std::pair<Monomial, Q>> v(s.terms().begin(), s.terms().end());
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
    return Monomial::compare_graded(a.first, b.first) < 0;
  });
  return v;
}

std::string monomial_canonical(const Monomial& m) {
  return "t^{" + m.cls.to_string() + "} · z^{" + vec_to_string(m.dir) + "}";
}

std::string TruncatedSeries::canonical() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : sorted_terms(*this)) {
    if (!first) os << " + ";
    os << c.get_str() << " · " << monomial_canonical(m);
    first = false;
  }
  return os.str();
}

static std::string var_name(int i, int rank) {
  static const char* names[] = {"x", "y", "z", "w"};
  if (rank <= 4) return names[i];
  return "z" + std::to_string(i + 1);
}

std::string monomial_pretty(const Monomial& m) {
  std::ostringstream os;
  bool toric_only = !m.cls.is_zero();
  for (auto& [id, k] : m.cls.terms())
    if (Registry::global().kind(id) != GenKind::Toric || k < 0) toric_only = false;
  if (toric_only) {
    for (auto& [id, k] : m.cls.terms()) {
      os << Registry::global().name(id);
      if (k != 1) os << "^" << k;
    }
  } else if (!m.cls.is_zero()) {
    os << "t^{" << m.cls.to_string() << "}";
  }
  int rank = static_cast<int>(m.dir.size());
  for (int i = 0; i < rank; ++i) {
    if (m.dir[i] == 0) continue;
    os << var_name(i, rank);
    if (m.dir[i] != 1) os << "^" << m.dir[i];
  }
  std::string s = os.str();
  return s.empty() ? "1" : s;
}

std::string TruncatedSeries::pretty() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : sorted_terms(*this)) {
    std::string body = monomial_pretty(m);
    Q a = abs(c);
    if (c < 0) os << "-";
    else if (!first) os << "+";
    if (body == "1") {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str();
      os << body;
    }
    first = false;
  }
  return os.str();
}

TruncatedSeries substitute(const TruncatedSeries& f, const std::vector<SubstRule>& rules,
                           int cutoff) {
  TruncatedSeries out(f.rank(), cutoff);
  for (auto& [m, c] : f.terms()) {
    Vec dir(m.dir.size(), 0);
    Monomial image(Vec(out.rank(), 0), CurveClass());
    for (auto& [id, k] : m.cls.terms()) {
      auto it = std::find_if(rules.begin(), rules.end(),
                             [&](const SubstRule& r) { return r.gen == id; });
      if (it == rules.end() || k < 0) throw Error("non-factorable term");
      for (size_t i = 0; i < dir.size(); ++i) dir[i] += k * it->source_dir[i];
      image = image * it->image.pow(k);
    }
    if (dir != m.dir) throw Error("non-factorable term");
    out.add_term(image, c);
  }
  return out;
}

}  // namespace hs
