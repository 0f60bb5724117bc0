#include "bdcone/hierarchy/problems.hpp"

#include <stdexcept>

namespace bdcone {

namespace {

Polynomial pure_power(std::size_t n, std::size_t i, int p) {
  std::vector<int> e(n, 0);
  e[i] = p;
  return Polynomial::monomial(Exponent(std::move(e)));
}

Polynomial first_four_product(std::size_t n) {
  std::vector<int> e(n, 0);
  for (std::size_t i = 0; i < 4; ++i) e[i] = 1;
  return Polynomial::monomial(Exponent(std::move(e)));
}

ProblemData power_problem(std::size_t n, int p, double weight, Polynomial ball) {
  ProblemData data;
  data.f = Polynomial(n);
  for (std::size_t i = 0; i < n; ++i) data.f += pure_power(n, i, p);
  data.f -= first_four_product(n) * weight;
  data.g.push_back(std::move(ball));
  add_box(data, {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)});
  return data;
}

}  // namespace

ProblemData make_ep1(std::size_t n) {
  if (n < 4) throw std::invalid_argument("make_ep1: n must be at least 4");
  Polynomial ball = Polynomial::constant(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) ball -= pure_power(n, i, 2);
  return power_problem(n, 4, static_cast<double>(n), std::move(ball));
}

ProblemData make_ep2() {
  const std::size_t n = 4;
  Polynomial ball = Polynomial::constant(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) ball -= pure_power(n, i, 10);
  return power_problem(n, 10, 10.0, std::move(ball));
}

ProblemData make_socp_convex_example() {
  ProblemData data;
  data.f = pure_power(2, 0, 4) - Polynomial::variable(2, 1);
  data.g.push_back(Polynomial::constant(2, 1.0) - pure_power(2, 0, 4) - pure_power(2, 1, 4));
  data.M = 2.0;
  return data;
}

}  // namespace bdcone
