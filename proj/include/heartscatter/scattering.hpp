#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "heartscatter/lattice.hpp"
#include "heartscatter/series.hpp"

namespace hs {

struct Wall {
  Cone support;
  Vec direction;            // every term of function is z^{-k*direction};
                            // zero for a mixed wall with tangent exponents
  TruncatedSeries function;
  bool incoming = false;    // -direction lies in the support
  Vec normal;               // primitive, first nonzero entry positive

  Wall() = default;
  // Validates and fills `incoming` and `normal`.
  Wall(Cone support, Vec direction, TruncatedSeries function);
};

// z^m * f^{<n_app, m>}, the image of one monomial under one crossing.
TruncatedSeries cross(const Wall& w, const Monomial& m, int side);

struct WallStructure {
  int rank = 0;
  int cutoff = 0;
  std::vector<Wall> walls;

  WallStructure() = default;
  WallStructure(int rank, int cutoff) : rank(rank), cutoff(cutoff) {}
  // Multiplies into an existing wall with the same support and direction.
  void add_wall(const Wall& w);
  // Walls sorted by (support, direction).
  std::vector<Wall> sorted() const;
};

// Ring automorphism given by the images of z^{e_1}, ..., z^{e_n}
// (curve classes are fixed).
struct RingAutomorphism {
  std::vector<TruncatedSeries> images;
  bool is_identity() const;
  bool operator==(const RingAutomorphism& o) const { return images == o.images; }
};

// A codimension-two locus where walls meet. For rank 2 the only joint is
// the origin and `ray` is empty.
struct Joint {
  Vec ray;
  std::vector<int> walls;  // indices of walls whose support contains ray
};

std::vector<Joint> enumerate_joints(const WallStructure& ws);

// Counterclockwise loop around the joint in the oriented quotient basis,
// starting in the chamber that contains the projected reference vector.
RingAutomorphism loop_product(const WallStructure& ws, const Joint& j, int cutoff = -1);
RingAutomorphism loop_product_at(const WallStructure& ws, const Vec& ray, int cutoff = -1);

struct DefectTerm {
  Monomial mono;
  Q coeff;       // inserting exp(coeff * z^mono) on cone(ray, -dir) cancels it
  Vec normal;    // positive on the chamber preceding the new wall
  bool radial = false;
};

// Order-k part of the loop product at j, which must be trivial below k.
std::vector<DefectTerm> defect(const WallStructure& ws, const Joint& j, int k);

struct CompletionOptions {
  long budget = -1;        // insertions per order; -1 reads HEARTSCATTER_BUDGET or 10000
  bool parallel = true;
  std::function<void(int order, int round, int inserted)> on_round;
};

struct CompletionStats {
  std::vector<int> rounds_per_order;
  std::vector<int> insertions_per_order;
};

WallStructure complete(const WallStructure& ws, int N, const CompletionOptions& opt = {},
                       CompletionStats* stats = nullptr);

bool verify_consistent(const WallStructure& ws);

// Walls (1 + t z^{m})^{d_rho} on every codimension-one cone rho containing
// the ray m with d_rho > 0.
std::vector<Wall> widget(const Fan& fan, int ray_index, int toric_gen,
                         const std::map<int, int>& intersections, int cutoff);

// Product along the polyline through `points` (generic rational points).
RingAutomorphism path_product(const WallStructure& ws, const std::vector<QVec>& points);

std::string walls_json(const WallStructure& ws);
std::string walls_table(const WallStructure& ws);

}  // namespace hs
