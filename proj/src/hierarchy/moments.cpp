#include "bdcone/hierarchy/moments.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bdcone {

double MomentVector::at(const Exponent& e) const {
  return y[static_cast<Eigen::Index>(basis.index_of(e))];
}

MomentVector dirac_moments(std::span<const double> point, int D) {
  MomentVector m;
  m.basis = MonomialBasis(point.size(), D);
  m.y.resize(static_cast<Eigen::Index>(m.basis.size()));
  for (std::size_t k = 0; k < m.basis.size(); ++k) {
    m.y[static_cast<Eigen::Index>(k)] = evaluate(Polynomial::monomial(m.basis.exponent_at(k)), point);
  }
  return m;
}

double riesz(const MomentVector& y, const Polynomial& f) {
  if (f.nvars() != y.nvars()) throw std::invalid_argument("riesz: variable count mismatch");
  if (f.degree() > y.degree()) {
    throw std::out_of_range("riesz: degree " + std::to_string(f.degree()) + " exceeds moment degree " +
                            std::to_string(y.degree()));
  }
  double s = 0.0;
  for (const auto& [e, c] : f.terms()) s += c * y.at(e);
  return s;
}

namespace {

Eigen::MatrixXd gram_of(const MomentVector& y, const std::vector<Exponent>& rows, int u) {
  if (2 * u > y.degree()) {
    throw std::out_of_range("moment matrix: 2u = " + std::to_string(2 * u) +
                            " exceeds moment degree " + std::to_string(y.degree()));
  }
  const auto s = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = y.at(rows[static_cast<std::size_t>(i)] + rows[static_cast<std::size_t>(j)]);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

}  // namespace

Eigen::MatrixXd moment_matrix(const MomentVector& y, int u) {
  return gram_of(y, MonomialBasis(y.nvars(), u).exponents(), u);
}

std::vector<Exponent> support_basis(std::size_t nvars, int u, std::span<const std::size_t> vars) {
  std::vector<bool> allowed(nvars, false);
  for (std::size_t v : vars) {
    if (v >= nvars) throw std::out_of_range("support_basis: variable index out of range");
    allowed[v] = true;
  }
  std::vector<Exponent> out;
  for (const auto& e : MonomialBasis(nvars, u)) {
    bool ok = true;
    for (std::size_t i = 0; i < nvars && ok; ++i) ok = e[i] == 0 || allowed[i];
    if (ok) out.push_back(e);
  }
  return out;
}

Eigen::MatrixXd moment_submatrix(const MomentVector& y, int u, std::span<const std::size_t> vars) {
  return gram_of(y, support_basis(y.nvars(), u, vars), u);
}

}  // namespace bdcone
