#pragma once

#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hs {

enum class GenKind { Toric, Exceptional, Curve };

// Process-wide table of named curve-class generators. Append only.
class Registry {
 public:
  static Registry& global();

  // Returns the id of `name`, creating it on first use. Re-registering a
  // name with a different kind throws.
  int intern(const std::string& name, GenKind kind);
  int find(const std::string& name) const;  // -1 if absent
  GenKind kind(int id) const;
  std::string name(int id) const;

  static int order_weight(GenKind k);
  static int depth_weight(GenKind k);

 private:
  mutable std::shared_mutex mu_;
  std::vector<std::pair<std::string, GenKind>> gens_;
  std::unordered_map<std::string, int> index_;
};

// Integer combination of registered generators, stored sparse and sorted
// by id with no zero exponents.
class CurveClass {
 public:
  CurveClass() = default;
  static CurveClass gen(int id, long long exp = 1);
  static CurveClass named(const std::string& name, GenKind kind,
                          long long exp = 1);

  const std::vector<std::pair<int, long long>>& terms() const { return e_; }
  long long exponent(int id) const;
  bool is_zero() const { return e_.empty(); }

  int order() const;
  int depth() const;

  CurveClass operator+(const CurveClass& o) const;
  CurveClass operator-(const CurveClass& o) const;
  CurveClass operator-() const;
  CurveClass scaled(long long k) const;
  CurveClass& operator+=(const CurveClass& o);

  bool operator==(const CurveClass& o) const { return e_ == o.e_; }
  bool operator!=(const CurveClass& o) const { return e_ != o.e_; }
  // Storage order (by id); used for map keys.
  bool operator<(const CurveClass& o) const { return e_ < o.e_; }

  // Lexicographic by generator name, used for display and leading terms.
  static int compare_by_name(const CurveClass& a, const CurveClass& b);

  // "L-E1-E2", "2t_11+t_21", "0".
  std::string to_string() const;

 private:
  std::vector<std::pair<int, long long>> e_;
};

long long binomial(long long n, long long k);

}  // namespace hs
