#pragma once

#include <cstddef>

#include "bdcone/certcones/gram.hpp"
#include "bdcone/conic/problem.hpp"
#include "bdcone/polycore/monomial_basis.hpp"
#include "bdcone/polycore/polynomial.hpp"

namespace bdcone {

struct GramOptions {
  /// Apply newton_prune to the Gram bases.
  bool prune = true;
};

/// Feasibility system f = sigma_1 + sigma_2 with sigma_1 SOS in the first n1
/// variables and sigma_2 SDSOS in the last n2, both of degree d. One equality
/// row per monomial of degree <= d (row i matches rows.exponent_at(i)); the
/// conic objective is zero.
struct GramSystem {
  std::size_t nvars = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  int degree = 0;
  MonomialBasis rows;
  GramLayout gram;
  ConicProblem conic;
};

/// Pure PSD Gram system (n1 = n).
GramSystem sos_system(const Polynomial& f, int d, const GramOptions& opts = {});

/// Pure SDSOS system (n2 = n).
GramSystem sdsos_system(const Polynomial& f, int d, const GramOptions& opts = {});

/// Throws std::invalid_argument for odd d, degree(f) > d or n1 + n2 != nvars.
GramSystem mixed_system(const Polynomial& f, std::size_t n1, std::size_t n2, int d,
                        const GramOptions& opts = {});

}  // namespace bdcone
