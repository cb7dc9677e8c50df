#pragma once

#include <optional>
#include <vector>

#include "heartscatter/curve_class.hpp"
#include "heartscatter/types.hpp"

namespace hs {

long long dot(const Vec& a, const Vec& b);
Q dot(const Vec& a, const QVec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec neg(const Vec& a);
Vec scale(const Vec& a, long long k);
bool is_zero(const Vec& a);
Vec cross(const Vec& a, const Vec& b);
long long det3(const Vec& a, const Vec& b, const Vec& c);

Vec primitive(const Vec& v);
int rank_of(const std::vector<Vec>& vs);

// Exact coefficients of v in the span of gens, or nullopt if v is not in it.
std::optional<QVec> span_coords(const std::vector<Vec>& gens, const QVec& v);

// Simplicial cone spanned by linearly independent primitive generators.
// Generators are kept sorted so equal cones compare equal.
class Cone {
 public:
  Cone() = default;
  explicit Cone(std::vector<Vec> gens);
  const std::vector<Vec>& gens() const { return gens_; }
  int dim() const { return static_cast<int>(gens_.size()); }
  int ambient() const { return gens_.empty() ? 0 : static_cast<int>(gens_[0].size()); }
  bool operator==(const Cone& o) const { return gens_ == o.gens_; }
  bool operator<(const Cone& o) const { return gens_ < o.gens_; }
  bool contains(const Vec& v) const;
  bool contains(const QVec& v) const;
  bool contains_in_relative_interior(const QVec& v) const;

 private:
  std::vector<Vec> gens_;
};

bool cone_contains(const Cone& c, const Vec& v);

// Primitive covector vanishing on a span of rank n-1 (sign: first nonzero
// entry positive).
Vec normal_covector(const std::vector<Vec>& span);

// Coordinates in the quotient lattice by `ray`. The quotient map is the
// Hermite normal form of any integer (n-1)xn matrix with kernel Z*ray,
// oriented so that det(ray, b_1, ..., b_{n-1}) = +1 for the dual basis.
class RayProjection {
 public:
  explicit RayProjection(const Vec& ray);
  Vec project(const Vec& v) const;
  QVec project(const QVec& v) const;
  // Covector on the quotient induced by a covector vanishing on ray.
  Vec induced_covector(const Vec& n) const;
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<Vec>& quotient_basis() const { return basis_; }

 private:
  Vec ray_;
  std::vector<Vec> rows_;   // the quotient map
  std::vector<Vec> basis_;  // lifts b_i with rows_ . b_j = delta_ij
};

std::vector<Vec> project_along(const Vec& ray, const std::vector<Vec>& vs);

std::vector<std::vector<long long>> hermite_normal_form(std::vector<std::vector<long long>> m);

// Complete simplicial fan.
class Fan {
 public:
  Fan() = default;
  Fan(std::vector<Vec> rays, std::vector<std::vector<int>> maximal);

  int rank() const { return rank_; }
  const std::vector<Vec>& rays() const { return rays_; }
  const std::vector<std::vector<int>>& maximal() const { return maximal_; }
  const std::vector<std::vector<int>>& codim1() const { return codim1_; }
  // The two maximal cones adjacent to codim1()[i].
  const std::pair<int, int>& adjacent(int i) const { return adjacent_[i]; }
  Cone maximal_cone(int i) const;
  Cone codim1_cone(int i) const;
  Vec codim1_normal(int i) const;  // positive on adjacent(i).second
  int ray_index(const Vec& r) const;  // -1 if absent
  int codim1_index(std::vector<int> ray_ids) const;  // -1 if absent
  // First maximal cone containing p, or -1.
  int find_cone(const QVec& p) const;
  std::vector<int> cones_containing(const QVec& p) const;

 private:
  int rank_ = 0;
  std::vector<Vec> rays_;
  std::vector<std::vector<int>> maximal_;
  std::vector<std::vector<int>> codim1_;
  std::vector<std::pair<int, int>> adjacent_;
};

// Linear function with curve-class coefficients: value(m) = sum_k m_k c_k.
struct ClassCovector {
  std::vector<CurveClass> coeff;
  CurveClass value(const Vec& m) const;
  bool operator==(const ClassCovector& o) const { return coeff == o.coeff; }
};

// Piecewise linear function on a fan, zero on a base cone, with a kink
// class on each codimension-one cone.
class PLFunction {
 public:
  PLFunction() = default;
  PLFunction(const Fan& fan, int base_cone, std::vector<CurveClass> kinks);

  const std::vector<ClassCovector>& reps() const { return reps_; }
  const std::vector<CurveClass>& kinks() const { return kinks_; }
  int base_cone() const { return base_; }
  CurveClass value_on(int cone, const Vec& m) const { return reps_[cone].value(m); }
  // Evaluates with the representative of a maximal cone containing m.
  CurveClass value(const Fan& fan, const Vec& m) const;

 private:
  int base_ = 0;
  std::vector<CurveClass> kinks_;
  std::vector<ClassCovector> reps_;
};

// Fan of projective n-space (rays e_1..e_n, -sum e_i; cone 0 is the
// positive orthant) and the PL function with one kink class everywhere.
Fan projective_space_fan(int n);
PLFunction projective_space_pl(const Fan& fan, int base_cone, const CurveClass& kink);

}  // namespace hs
