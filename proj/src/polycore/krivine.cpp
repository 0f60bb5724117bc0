#include "bdcone/polycore/krivine.hpp"

#include "bdcone/kernels/kernels.hpp"
#include "bdcone/polycore/monomial_basis.hpp"

namespace bdcone {

std::vector<std::pair<std::vector<int>, std::vector<int>>> krivine_indices(std::size_t m, int k) {
  if (k < 0) throw std::invalid_argument("krivine_indices: negative level");
  const MonomialBasis pq(2 * m, k);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  out.reserve(pq.size());
  for (const auto& e : pq) {
    const auto& w = e.powers();
    out.emplace_back(std::vector<int>(w.begin(), w.begin() + static_cast<long>(m)),
                     std::vector<int>(w.begin() + static_cast<long>(m), w.end()));
  }
  return out;
}

std::vector<KrivineProduct> krivine_products(std::span<const Polynomial> ghat, int k,
                                             std::size_t nvars) {
  return kernels::parallel::krivine_products(ghat, k, nvars);
}

}  // namespace bdcone
