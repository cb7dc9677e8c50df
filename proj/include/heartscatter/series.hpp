#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "heartscatter/curve_class.hpp"
#include "heartscatter/types.hpp"

namespace hs {

// t^cls z^dir with the additive gradings cached.
struct Monomial {
  Vec dir;
  CurveClass cls;
  int order = 0;
  int depth = 0;

  Monomial() = default;
  Monomial(Vec d, CurveClass c);
  Monomial operator*(const Monomial& o) const;
  Monomial pow(long long k) const;
  bool operator==(const Monomial& o) const { return dir == o.dir && cls == o.cls; }
  bool operator<(const Monomial& o) const {
    return dir != o.dir ? dir < o.dir : cls < o.cls;
  }
  // Stated total order: order, depth, lex z-exponent, lex class by name.
  static int compare_graded(const Monomial& a, const Monomial& b);
  // Leading-term order used by theta expansion: depth before order.
  static int compare_leading(const Monomial& a, const Monomial& b);
};

// Finite sum of rational multiples of monomials, truncated at a cutoff:
// a term survives iff order <= cutoff and depth <= cutoff.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(int rank, int cutoff) : rank_(rank), cutoff_(cutoff) {}

  static TruncatedSeries one(int rank, int cutoff);
  static TruncatedSeries monomial(int rank, int cutoff, const Monomial& m,
                                  const Q& c = 1);
  // 1 + c * m
  static TruncatedSeries binomial(int rank, int cutoff, const Monomial& m,
                                  const Q& c = 1);

  int rank() const { return rank_; }
  int cutoff() const { return cutoff_; }
  const std::map<Monomial, Q>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  size_t size() const { return terms_.size(); }
  Q coefficient(const Monomial& m) const;

  // Adds c*m unless it is truncated away.
  void add_term(const Monomial& m, const Q& c);
  bool keeps(const Monomial& m) const {
    return m.order <= cutoff_ && m.depth <= cutoff_;
  }

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator-() const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries scaled(const Q& c) const;
  TruncatedSeries times_monomial(const Monomial& m, const Q& c = 1) const;
  bool operator==(const TruncatedSeries& o) const {
    return rank_ == o.rank_ && terms_ == o.terms_;
  }
  bool operator!=(const TruncatedSeries& o) const { return !(*this == o); }

  TruncatedSeries truncated(int cutoff) const;
  TruncatedSeries power(long long k) const;
  TruncatedSeries inverse() const;
  TruncatedSeries log_unit() const;
  TruncatedSeries exp_nilpotent() const;

  // Terms of order exactly k.
  TruncatedSeries order_part(int k) const;
  int min_order() const;  // of non-constant terms; INT_MAX if none

  bool integral() const;
  void require_integral(const std::string& where) const;

  // "c · t^{β} · z^{(m)}" terms joined by " + ", sorted by (order, lex).
  std::string canonical() const;
  // "1+t^{L-E1}x" style, variables x,y,z,w.
  std::string pretty() const;

 private:
  int rank_ = 0;
  int cutoff_ = 0;
  std::map<Monomial, Q> terms_;
};

TruncatedSeries operator*(const Q& c, const TruncatedSeries& s);

// Replaces every toric generator `gen` by the monomial `image`. A term is
// factorable iff its class only involves rule generators and its
// z-exponent equals the sum of the rule source directions.
struct SubstRule {
  int gen;
  Vec source_dir;
  Monomial image;
};
TruncatedSeries substitute(const TruncatedSeries& f,
                           const std::vector<SubstRule>& rules, int cutoff);

std::string monomial_pretty(const Monomial& m);
std::string monomial_canonical(const Monomial& m);

}  // namespace hs
