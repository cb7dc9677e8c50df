#pragma once

#include <map>
#include <string>
#include <vector>

#include "heartscatter/heart.hpp"
#include "heartscatter/scattering.hpp"

namespace hs {

// Wall structure plus the optional PL function whose kinks act on
// monomials crossing codim-1 cones of the fan.
struct ThetaContext {
  const WallStructure* ws = nullptr;
  const Fan* fan = nullptr;
  const PLFunction* pl = nullptr;
};

struct LineSegment {
  QVec start;            // empty when the segment comes from infinity
  QVec end;
  Vec velocity;          // equals mono.dir; travel is along -velocity
  Monomial mono;
  Q coeff;
};

struct BrokenLine {
  Vec asymptotic;
  QVec endpoint;
  std::vector<LineSegment> segments;
  const Monomial& final_mono() const { return segments.back().mono; }
  const Q& final_coeff() const { return segments.back().coeff; }
  int bends() const;
};

// Moves the class of m across codim-1 cone rho. crossing_sign = +1 when
// moving into the side where fan.codim1_normal(rho) is positive.
Monomial kink_transport(const Fan& fan, const PLFunction& pl, const Monomial& m, int rho,
                        int crossing_sign);

// (1, 1+1/7, 1+1/11, ...) in the generators of the base cone. `seed` is
// added to the last denominator.
QVec default_endpoint(const Fan& fan, int base_cone, int seed = 0);
QVec perturb_endpoint(const QVec& p);

struct ThetaOptions {
  bool parallel = true;
  bool retry = true;  // one retry at perturb_endpoint(p) when p is not generic
};

std::vector<BrokenLine> enumerate_broken_lines(const ThetaContext& ctx, const Vec& m0,
                                               const QVec& p, int N,
                                               const ThetaOptions& opt = {},
                                               QVec* used_endpoint = nullptr);

TruncatedSeries theta(const ThetaContext& ctx, const Vec& m0, const QVec& p, int N,
                      const ThetaOptions& opt = {}, QVec* used_endpoint = nullptr);

// Polynomial in theta symbols; keys are exponent vectors over `rays`.
struct ThetaPolynomial {
  std::vector<int> rays;
  std::map<std::vector<long long>, TruncatedSeries> terms;
  std::string to_string() const;  // symbols ϑ<ray index + 1>
};

ThetaPolynomial express_in_thetas(const TruncatedSeries& g, const Fan& fan,
                                  const std::vector<int>& rays,
                                  const std::vector<TruncatedSeries>& thetas);

struct MirrorPresentation {
  std::vector<std::string> generators;
  std::vector<int> rays;
  std::vector<TruncatedSeries> thetas;  // one per fan ray
  ThetaPolynomial expression;
  std::string relation;
  QVec endpoint;
};

MirrorPresentation mirror_presentation(const BlowupData& bd, const WallStructure& heart,
                                       const QVec& p, int N, std::vector<int> relation_rays = {},
                                       const ThetaOptions& opt = {});

// Compares the substitution image of the symbolic generators of the
// product-with-P^1 construction against heart thetas.
bool aak_check(const BlowupData& bd, const WallStructure& heart, int N,
               std::string* report = nullptr);

std::string thetas_json(const Fan& fan, const std::vector<TruncatedSeries>& thetas,
                        const QVec& endpoint);
std::string class_bracket(const CurveClass& c);  // "t^[L-E1]"

}  // namespace hs
