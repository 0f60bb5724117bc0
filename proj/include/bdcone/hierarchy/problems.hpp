#pragma once

#include <cstddef>

#include "bdcone/hierarchy/problem_data.hpp"

namespace bdcone {

/// min sum x_i^4 - n x1 x2 x3 x4 subject to 1 - |x|^2 >= 0 and 0 <= x_i <= 1.
/// The minimum is (4 - n) / 16 at (1/2, 1/2, 1/2, 1/2, 0, ..., 0). n >= 4.
ProblemData make_ep1(std::size_t n);

/// min sum x_i^10 - 10 x1 x2 x3 x4 subject to 1 - sum x_i^10 >= 0 and
/// 0 <= x_i <= 1 over four variables. The minimum is 1 - 10 (1/4)^(2/5).
ProblemData make_ep2();

/// min x1^4 - x2 subject to 1 - x1^4 - x2^4 >= 0, with M = 2. The minimum is
/// -1 at (0, 1).
ProblemData make_socp_convex_example();

}  // namespace bdcone
