#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bdcone/polycore/monomial_basis.hpp"
#include "bdcone/polycore/polynomial.hpp"

namespace bdcone {

/// Pseudo-moments y indexed by a graded-lex basis of degree D; y[0] pairs
/// with the constant monomial.
struct MomentVector {
  MonomialBasis basis;
  Eigen::VectorXd y;

  std::size_t nvars() const { return basis.nvars(); }
  int degree() const { return basis.max_degree(); }
  double at(const Exponent& e) const;
};

/// Moments of the point mass at `point` up to degree D.
MomentVector dirac_moments(std::span<const double> point, int D);

/// L_y(f) = sum f_alpha y_alpha. Throws std::out_of_range if degree(f) > D.
double riesz(const MomentVector& y, const Polynomial& f);

/// M_u(y), entry (beta, gamma) = y_{beta + gamma}. Requires 2u <= D.
Eigen::MatrixXd moment_matrix(const MomentVector& y, int u);

/// Basis monomials of degree <= u whose support lies in `vars`.
std::vector<Exponent> support_basis(std::size_t nvars, int u, std::span<const std::size_t> vars);

/// Restriction of M_u(y) to rows and columns with support in `vars`.
Eigen::MatrixXd moment_submatrix(const MomentVector& y, int u, std::span<const std::size_t> vars);

}  // namespace bdcone
