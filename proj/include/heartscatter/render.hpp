#pragma once

#include <string>
#include <vector>

#include "heartscatter/thetas.hpp"

namespace hs {

// Wall traces on the plane spanned by fan rays a and b, in plane
// coordinates with respect to (ray a, ray b), drawn in the viewBox
// [0,1]x[0,1]. Rank-2 structures ignore a and b and use the standard basis.
std::string render_slice_svg(const WallStructure& ws, const Fan& fan, int ray_a, int ray_b,
                             const std::vector<BrokenLine>& lines = {});

}  // namespace hs
