#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace hs {

using Q = mpq_class;
using Vec = std::vector<long long>;  // lattice vector or covector
using QVec = std::vector<Q>;         // rational point of the real span

std::string vec_to_string(const Vec& v);      // "(1,0,-1)"
std::string q_to_string(const Q& q);         // "3/7", "-2"
QVec to_qvec(const Vec& v);

}  // namespace hs
