#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bdcone/conic/problem.hpp"
#include "bdcone/polycore/monomial_basis.hpp"
#include "bdcone/polycore/polynomial.hpp"

namespace bdcone {

/// Column layout of the Gram blocks of a (n1, n2)-mixed certificate
/// sigma_1 + sigma_2: one PSD block over `psd_basis`, then nonnegative
/// diagonal weights and one 3-dimensional second-order block per pair i < j
/// over `sdsos_basis`.
///
/// A pair block (t, u, v) encodes the 2x2 block [[a, c], [c, b]] with
/// a = (t + u) / 2, b = (t - u) / 2, c = v / 2, so that t >= |(u, v)| is
/// |(2c, a - b)| <= a + b.
struct GramLayout {
  std::vector<Exponent> psd_basis;
  std::vector<Exponent> sdsos_basis;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t psd_offset = 0;
  std::size_t diag_offset = 0;
  std::size_t soc_offset = 0;

  bool has_psd() const { return !psd_basis.empty(); }
  bool has_sdsos() const { return !sdsos_basis.empty(); }
  /// Cone blocks in the order they were appended.
  std::vector<ConeBlock> blocks() const;
  std::size_t num_columns() const;
};

/// Appends the Gram blocks to `builder`. Every product of two basis monomials
/// adds its coefficient to the row `row_offset + rows.index_of(product)`.
/// Throws std::out_of_range when a product is not in `rows`.
GramLayout add_gram_blocks(ConicBuilder& builder, const MonomialBasis& rows,
                           std::size_t row_offset, std::vector<Exponent> psd_basis,
                           std::vector<Exponent> sdsos_basis);

/// Half-degree bases of the split: X1 monomials padded with trailing zeros
/// and X2 monomials padded with leading zeros. An empty block yields an
/// empty basis.
std::pair<std::vector<Exponent>, std::vector<Exponent>> split_bases(std::size_t n1,
                                                                    std::size_t n2,
                                                                    int half_degree);

/// Drops basis monomials that cannot occur in any Gram representation of f:
/// 2*beta must lie in the bounding box and degree range of supp(f), and a
/// monomial whose square is absent from f and is not a cross product of two
/// other basis elements is removed (repeatedly). Applied to both bases jointly.
void newton_prune(const Polynomial& f, std::vector<Exponent>& psd_basis,
                  std::vector<Exponent>& sdsos_basis);

/// Symmetric PSD Gram matrix read from a conic solution.
Eigen::MatrixXd psd_gram(const GramLayout& g, std::span<const double> z);

/// (beta * m_i + gamma * m_j)^2 over the SDSOS basis.
struct BinomialSquare {
  std::size_t i = 0;
  std::size_t j = 0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// sum_i alpha_i m_i^2 + sum (beta m_i + gamma m_j)^2.
struct SdsosWitness {
  std::vector<Exponent> basis;
  std::vector<double> alpha;
  std::vector<BinomialSquare> squares;

  std::size_t nvars() const;
  Polynomial expand(std::size_t nvars) const;
};

/// Decomposes the SDSOS part of a conic solution into scaled monomial and
/// binomial squares. Tiny negative leftovers from rounding are clipped to 0.
SdsosWitness sdsos_witness(const GramLayout& g, std::span<const double> z);

/// sigma_1 + sigma_2 as a polynomial, from a conic solution.
Polynomial gram_polynomial(const GramLayout& g, std::span<const double> z, std::size_t nvars);

}  // namespace bdcone
