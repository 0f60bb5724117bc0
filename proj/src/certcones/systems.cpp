#include "bdcone/certcones/systems.hpp"

#include <stdexcept>
#include <string>

namespace bdcone {

GramSystem sos_system(const Polynomial& f, int d, const GramOptions& opts) {
  return mixed_system(f, f.nvars(), 0, d, opts);
}

GramSystem sdsos_system(const Polynomial& f, int d, const GramOptions& opts) {
  return mixed_system(f, 0, f.nvars(), d, opts);
}

GramSystem mixed_system(const Polynomial& f, std::size_t n1, std::size_t n2, int d,
                        const GramOptions& opts) {
  if (d < 0 || d % 2 != 0) {
    throw std::invalid_argument("gram system: degree " + std::to_string(d) + " is not even");
  }
  if (f.degree() > d) {
    throw std::invalid_argument("gram system: degree(f) = " + std::to_string(f.degree()) +
                                " exceeds " + std::to_string(d));
  }
  if (n1 + n2 != f.nvars()) {
    throw std::invalid_argument("gram system: split (" + std::to_string(n1) + ", " +
                                std::to_string(n2) + ") does not match " +
                                std::to_string(f.nvars()) + " variables");
  }
  GramSystem sys;
  sys.nvars = f.nvars();
  sys.n1 = n1;
  sys.n2 = n2;
  sys.degree = d;
  sys.rows = MonomialBasis(f.nvars(), d);
  auto [b1, b2] = split_bases(n1, n2, d / 2);
  if (opts.prune) newton_prune(f, b1, b2);

  ConicBuilder builder;
  builder.add_rows(sys.rows.size());
  for (const auto& [e, c] : f.terms()) builder.set_rhs(sys.rows.index_of(e), c);
  sys.gram = add_gram_blocks(builder, sys.rows, 0, std::move(b1), std::move(b2));
  sys.conic = builder.build();
  return sys;
}

}  // namespace bdcone
