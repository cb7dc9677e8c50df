#pragma once

#include <map>
#include <string>
#include <vector>

#include "heartscatter/lattice.hpp"
#include "heartscatter/scattering.hpp"

namespace hs {

// One irreducible component of a hypersurface in a toric boundary divisor.
struct CenterComponent {
  std::string label;               // exceptional class name, e.g. "E1"
  std::string variable;            // toric variable name, e.g. "t1"
  std::map<int, int> intersections;  // codim-1 cone index -> intersection number
  int exceptional_gen = -1;
  int toric_gen = -1;
};

struct Center {
  int ray = -1;  // index into fan.rays()
  std::vector<CenterComponent> components;
};

struct BlowupData {
  Fan fan;
  std::vector<Center> centers;
  PLFunction psi;   // kinks of the polarisation, base cone 0
  PLFunction phi0;  // same kinks, zero on the configured base cone
  int cutoff = 0;
};

// Registers generators and checks the center conditions. Centers on rays
// sharing a maximal cone are rejected unless allow_adjacent is set.
BlowupData make_blowup(Fan fan, std::vector<Center> centers, const std::vector<CurveClass>& kinks,
                       int base_cone, int cutoff, bool allow_adjacent = false);

WallStructure build_initial(const BlowupData& bd);

// Class attached to the toric monomial prod t_ij^{a_ij} on a wall in
// maximal cone sigma.
CurveClass beta_class(const BlowupData& bd, const std::map<int, long long>& exponents, int sigma);

// Splits walls of rank-3 structures where they cross codim-1 cones, so
// every wall lies in one maximal cone.
WallStructure refine(const WallStructure& ws, const Fan& fan);

// Index of a maximal cone containing the support, or -1.
int containing_cone(const Fan& fan, const Cone& support);

// Rewrites every wall with t_ij z^{m_i} -> t^{-E_ij + phi0(m_i) - phi0_sigma(m_i)} z^{m_i}.
WallStructure to_heart(const WallStructure& ws, const BlowupData& bd);

// Drops every non-exceptional generator from the classes of all walls.
WallStructure exceptional_restriction(const WallStructure& ws);

}  // namespace hs
