#pragma once

#include "eoqc/half_integer.hpp"

namespace eoqc {

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> in the Condon-Shortley
// convention. Returns 0 when M != m1+m2 or the triangle rule fails.
// Throws std::invalid_argument for negative j or |m| > j.
double cg_coefficient(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt J, HalfInt M);

}  // namespace eoqc
