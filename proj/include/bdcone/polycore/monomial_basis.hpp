#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bdcone/polycore/exponent.hpp"

namespace bdcone {

/// s(d, n) = C(n + d, d). Throws std::overflow_error if the count does not
/// fit in 64 bits.
std::uint64_t basis_size(std::size_t n, int d);

/// All monomials of degree <= d in n variables, graded-lex ordered. Index 0
/// is the constant monomial and indices 1..n are x_1..x_n.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(std::size_t nvars, int max_degree);
  /// Basis over an explicit exponent list (kept in the given order).
  explicit MonomialBasis(std::vector<Exponent> exponents);

  std::size_t nvars() const { return nvars_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return order_.size(); }

  const Exponent& exponent_at(std::size_t index) const { return order_.at(index); }
  std::optional<std::size_t> find(const Exponent& e) const;
  /// Throws std::out_of_range when `e` is not in the basis.
  std::size_t index_of(const Exponent& e) const;
  bool contains(const Exponent& e) const { return find(e).has_value(); }

  const std::vector<Exponent>& exponents() const { return order_; }
  auto begin() const { return order_.begin(); }
  auto end() const { return order_.end(); }

 private:
  void build_index();

  std::size_t nvars_ = 0;
  int max_degree_ = 0;
  std::vector<Exponent> order_;
  std::unordered_map<Exponent, std::size_t, ExponentHash> index_;
};

/// All exponents of total degree exactly `degree` in n variables, in
/// graded-lex order.
std::vector<Exponent> exponents_of_degree(std::size_t n, int degree);

enum class BlockPosition { kFirst, kSecond };

/// Pads each exponent of a block basis with zeros on the complementary block:
/// kFirst gives (alpha, 0..0) and kSecond gives (0..0, alpha).
std::vector<Exponent> embed(const MonomialBasis& block, BlockPosition position,
                            std::size_t n1, std::size_t n2);

}  // namespace bdcone
