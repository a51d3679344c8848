#pragma once

#include "odeident/realjordan.hpp"

namespace odeident {

// Matrix exponential by scaling and squaring with a diagonal Padé approximant
// of degree 3, 5, 7, 9 or 13 picked from the 1-norm (Higham 2005 thresholds).
Mat expm(const Mat& M);

}  // namespace odeident
