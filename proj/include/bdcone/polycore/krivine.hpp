#pragma once

#include <span>
#include <vector>

#include "bdcone/polycore/polynomial.hpp"

namespace bdcone {

/// One Krivine-Stengle product h_{p,q} = prod_i ghat_i^{p_i} (1 - ghat_i)^{q_i}.
struct KrivineProduct {
  std::vector<int> p;
  std::vector<int> q;
  Polynomial h;
};

/// All (p, q) in N^m x N^m with |p| + |q| <= k, graded-lex ordered on the
/// concatenated vector (p, q). The first entry is (0, 0) with h = 1.
std::vector<std::pair<std::vector<int>, std::vector<int>>> krivine_indices(std::size_t m, int k);

/// Products for the scaled constraints `ghat`. `nvars` is taken from ghat
/// unless given (needed when ghat is empty). Uses the OpenMP kernel; the
/// result is identical to kernels::serial::krivine_products.
std::vector<KrivineProduct> krivine_products(std::span<const Polynomial> ghat, int k,
                                             std::size_t nvars = 0);

}  // namespace bdcone
