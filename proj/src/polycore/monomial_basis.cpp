#include "bdcone/polycore/monomial_basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bdcone {

std::uint64_t basis_size(std::size_t n, int d) {
  if (d < 0) throw std::invalid_argument("basis_size: negative degree");
  if (n > (std::size_t{1} << 62)) throw std::overflow_error("basis_size: n too large");
  // C(n+i, i) = C(n+i-1, i-1) * (n+i) / i; dividing by gcd first keeps every
  // intermediate exact.
  std::uint64_t acc = 1;
  for (int i = 1; i <= d; ++i) {
    const std::uint64_t top = static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(i);
    const std::uint64_t den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(top, den);
    const std::uint64_t a = top / g;
    const std::uint64_t b = den / g;
    if (__builtin_mul_overflow(acc / b, a, &acc)) {
      throw std::overflow_error("basis_size: C(n+d, d) overflows 64 bits");
    }
  }
  return acc;
}

namespace {

void fill_degree(std::size_t var, int remaining, std::vector<int>& cur,
                 std::vector<Exponent>& out) {
  const std::size_t n = cur.size();
  if (var + 1 == n) {
    cur[var] = remaining;
    out.emplace_back(cur);
    cur[var] = 0;
    return;
  }
  for (int p = remaining; p >= 0; --p) {
    cur[var] = p;
    fill_degree(var + 1, remaining - p, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Exponent> exponents_of_degree(std::size_t n, int degree) {
  std::vector<Exponent> out;
  if (n == 0) {
    if (degree == 0) out.emplace_back(0);
    return out;
  }
  std::vector<int> cur(n, 0);
  fill_degree(0, degree, cur, out);
  return out;
}

MonomialBasis::MonomialBasis(std::size_t nvars, int max_degree)
    : nvars_(nvars), max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("MonomialBasis: negative degree");
  const std::uint64_t total = basis_size(nvars, max_degree);
  if (total > (1ULL << 28)) throw std::length_error("MonomialBasis: too large");
  order_.reserve(static_cast<std::size_t>(total));
  for (int t = 0; t <= max_degree; ++t) {
    auto layer = exponents_of_degree(nvars, t);
    order_.insert(order_.end(), layer.begin(), layer.end());
  }
  build_index();
}

MonomialBasis::MonomialBasis(std::vector<Exponent> exponents)
    : order_(std::move(exponents)) {
  nvars_ = order_.empty() ? 0 : order_.front().size();
  for (const auto& e : order_) {
    if (e.size() != nvars_) throw std::invalid_argument("MonomialBasis: mixed lengths");
    max_degree_ = std::max(max_degree_, e.degree());
  }
  build_index();
}

void MonomialBasis::build_index() {
  index_.reserve(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (!index_.emplace(order_[i], i).second) {
      throw std::invalid_argument("MonomialBasis: duplicate exponent");
    }
  }
}

std::optional<std::size_t> MonomialBasis::find(const Exponent& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MonomialBasis::index_of(const Exponent& e) const {
  auto idx = find(e);
  if (!idx) throw std::out_of_range("MonomialBasis: exponent " + e.to_string() + " not in basis");
  return *idx;
}

std::vector<Exponent> embed(const MonomialBasis& block, BlockPosition position,
                            std::size_t n1, std::size_t n2) {
  const std::size_t expected = position == BlockPosition::kFirst ? n1 : n2;
  if (block.nvars() != expected) {
    throw std::invalid_argument("embed: block basis has " + std::to_string(block.nvars()) +
                                " variables, expected " + std::to_string(expected));
  }
  std::vector<Exponent> out;
  out.reserve(block.size());
  for (const auto& e : block) {
    if (position == BlockPosition::kFirst) {
      out.push_back(e.concat(Exponent(n2)));
    } else {
      out.push_back(Exponent(n1).concat(e));
    }
  }
  return out;
}

}  // namespace bdcone
