#include "heartscatter/curve_class.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "heartscatter/error.hpp"

namespace hs {

Registry& Registry::global() {
  static Registry r;
  return r;
}

int Registry::intern(const std::string& name, GenKind kind) {
  {
    std::shared_lock lk(mu_);
    auto it = index_.find(name);
    if (it != index_.end()) {
      if (gens_[it->second].second != kind)
        throw Error("generator '" + name + "' registered with another kind");
      return it->second;
    }
  }
  std::unique_lock lk(mu_);
  auto it = index_.find(name);
  if (it != index_.end()) {
    if (gens_[it->second].second != kind)
      throw Error("generator '" + name + "' registered with another kind");
    return it->second;
  }
  if (name.empty()) throw Error("empty generator name");
  int id = static_cast<int>(gens_.size());
  gens_.emplace_back(name, kind);
  index_.emplace(name, id);
  return id;
}

int Registry::find(const std::string& name) const {
  std::shared_lock lk(mu_);
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

GenKind Registry::kind(int id) const {
  std::shared_lock lk(mu_);
  return gens_.at(id).second;
}

std::string Registry::name(int id) const {
  std::shared_lock lk(mu_);
  return gens_.at(id).first;
}

int Registry::order_weight(GenKind k) {
  switch (k) {
    case GenKind::Toric: return 1;
    case GenKind::Exceptional: return 0;
    case GenKind::Curve: return 1;
  }
  return 0;
}

int Registry::depth_weight(GenKind k) {
  switch (k) {
    case GenKind::Toric: return 1;
    case GenKind::Exceptional: return -1;
    case GenKind::Curve: return 0;
  }
  return 0;
}

CurveClass CurveClass::gen(int id, long long exp) {
  CurveClass c;
  if (exp != 0) c.e_.emplace_back(id, exp);
  return c;
}

CurveClass CurveClass::named(const std::string& name, GenKind kind,
                             long long exp) {
  return gen(Registry::global().intern(name, kind), exp);
}

long long CurveClass::exponent(int id) const {
  auto it = std::lower_bound(e_.begin(), e_.end(), std::make_pair(id, 0LL),
                             [](auto& a, auto& b) { return a.first < b.first; });
  return (it != e_.end() && it->first == id) ? it->second : 0;
}

int CurveClass::order() const {
  long long s = 0;
  auto& R = Registry::global();
  for (auto& [id, k] : e_) s += k * Registry::order_weight(R.kind(id));
  return static_cast<int>(s);
}

int CurveClass::depth() const {
  long long s = 0;
  auto& R = Registry::global();
  for (auto& [id, k] : e_) s += k * Registry::depth_weight(R.kind(id));
  return static_cast<int>(s);
}

static std::vector<std::pair<int, long long>> merge(
    const std::vector<std::pair<int, long long>>& a,
    const std::vector<std::pair<int, long long>>& b, long long sb) {
  std::vector<std::pair<int, long long>> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sb * b[j].second);
      ++j;
    } else {
      long long v = a[i].second + sb * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

CurveClass CurveClass::operator+(const CurveClass& o) const {
  CurveClass c;
  c.e_ = merge(e_, o.e_, 1);
  return c;
}

CurveClass CurveClass::operator-(const CurveClass& o) const {
  CurveClass c;
  c.e_ = merge(e_, o.e_, -1);
  return c;
}

CurveClass CurveClass::operator-() const { return scaled(-1); }

CurveClass CurveClass::scaled(long long k) const {
  CurveClass c;
  if (k == 0) return c;
  c.e_ = e_;
  for (auto& p : c.e_) p.second *= k;
  return c;
}

CurveClass& CurveClass::operator+=(const CurveClass& o) {
  e_ = merge(e_, o.e_, 1);
  return *this;
}

static std::vector<std::pair<std::string, long long>> named_terms(
    const CurveClass& c) {
  std::vector<std::pair<std::string, long long>> v;
  for (auto& [id, k] : c.terms()) v.emplace_back(Registry::global().name(id), k);
  std::sort(v.begin(), v.end());
  return v;
}

int CurveClass::compare_by_name(const CurveClass& a, const CurveClass& b) {
  auto x = named_terms(a), y = named_terms(b);
  if (x < y) return -1;
  if (y < x) return 1;
  return 0;
}

std::string CurveClass::to_string() const {
  if (e_.empty()) return "0";
  // Curve classes first, then toric variables, then exceptional ones.
  auto v = named_terms(*this);
  auto rank = [](const std::string& n) {
    switch (Registry::global().kind(Registry::global().find(n))) {
      case GenKind::Curve: return 0;
      case GenKind::Toric: return 1;
      case GenKind::Exceptional: return 2;
    }
    return 3;
  };
  std::stable_sort(v.begin(), v.end(),
                   [&](auto& a, auto& b) { return rank(a.first) < rank(b.first); });
  std::ostringstream os;
  bool first = true;
  for (auto& [n, k] : v) {
    if (k < 0) os << "-";
    else if (!first) os << "+";
    long long a = k < 0 ? -k : k;
    if (a != 1) os << a;
    os << n;
    first = false;
  }
  return os.str();
}

long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace hs
