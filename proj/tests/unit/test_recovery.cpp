#include <cmath>
#include <random>

#include "doctest.h"

#include "bdcone/hierarchy/problems.hpp"
#include "bdcone/recovery/recovery.hpp"

using namespace bdcone;

namespace {

Polynomial x(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial cst(std::size_t n, double v) { return Polynomial::constant(n, v); }

// Convex combination of two point masses.
MomentVector two_point(const std::vector<double>& a, const std::vector<double>& b, double t, int D) {
  MomentVector y = dirac_moments(a, D);
  y.y = t * y.y + (1.0 - t) * dirac_moments(b, D).y;
  return y;
}

}  // namespace

TEST_CASE("extract_point reads first moments") {
  const std::vector<double> p{0.25, -1.5, 2.0};
  const auto pt = extract_point(dirac_moments(p, 2));
  REQUIRE(pt.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(pt[i] == doctest::Approx(p[i]));
  auto y = dirac_moments(p, 2);
  y.y[0] = 0.5;
  CHECK_THROWS_AS(extract_point(y), std::invalid_argument);
}

TEST_CASE("pairwise moment conditions") {
  const std::vector<double> p{0.3, -0.7};
  CHECK(pairwise_moment_violation(dirac_moments(p, 4)) < 1e-12);
  auto y = dirac_moments(p, 4);
  // Break |M_12| <= (M_11 + M_22) / 2 on the (x1, x2) pair.
  y.y[y.basis.index_of(Exponent({1, 1}))] = 5.0;
  CHECK(pairwise_moment_violation(y) > 1.0);
}

TEST_CASE("jensen check examples") {
  const Polynomial f = power(x(2, 0), 2) + 2.0 * power(x(2, 1), 2);
  const auto y = two_point({0.0, 0.0}, {1.0, 1.0}, 0.5, 2);
  const auto rep = jensen_check(f, y);
  CHECK(rep.preconditions);
  CHECK(rep.socp_convex == Answer::Yes);
  CHECK(rep.lhs == doctest::Approx(1.5));
  CHECK(rep.rhs == doctest::Approx(0.75));
  CHECK(rep.holds);

  // Not SOCP-convex: the preconditions fail but both sides are still reported.
  const Polynomial g = power(x(2, 0) + x(2, 1) - cst(2, 1.0), 2);
  const auto neg = jensen_check(g, dirac_moments(std::vector<double>{0.2, 0.1}, 2));
  CHECK(neg.socp_convex == Answer::No);
  CHECK_FALSE(neg.preconditions);
  CHECK(neg.lhs == doctest::Approx(neg.rhs));
}

TEST_CASE("jensen inequality on random two-point measures") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Polynomial f = power(x(2, 0), 4) + power(x(2, 1), 4) + power(x(2, 0) - x(2, 1), 2);
  for (int t = 0; t < 100; ++t) {
    const auto y = two_point({u(rng), u(rng)}, {u(rng), u(rng)}, 0.5 * (u(rng) + 1.0), 4);
    const auto rep = jensen_check(f, y, false);
    CHECK(rep.lhs - rep.rhs >= -1e-8);
    CHECK(rep.holds);
  }
}

TEST_CASE("recovery on the two-variable example is certified") {
  const auto data = make_socp_convex_example();
  const auto dual = build_exact_socp_dual(data, 4);
  const auto res = solve_relaxation(dual);
  REQUIRE(res.status == SolveStatus::Optimal);
  const auto rep = recover_and_verify(data, dual, res);
  REQUIRE(rep.x_star.size() == 2);
  CHECK(std::abs(rep.x_star[0]) < 1e-4);
  CHECK(std::abs(rep.x_star[1] - 1.0) < 1e-4);
  CHECK(rep.hypotheses);
  CHECK(rep.verdict == Verdict::CertifiedOptimal);
  CHECK(rep.objective_gap < 1e-5);
}

TEST_CASE("recovery verdicts without the hypotheses") {
  // Nonconvex objective with minimizers at +-1/sqrt(2): the moments average them.
  ProblemData data;
  data.f = power(x(1, 0), 4) - power(x(1, 0), 2);
  add_box(data, {{-1.0}, {1.0}});
  const auto dual = build_exact_socp_dual(data, 4);
  const auto res = solve_relaxation(dual);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.value == doctest::Approx(-0.25).epsilon(1e-6));
  const auto rep = recover_and_verify(data, dual, res);
  CHECK_FALSE(rep.hypotheses);
  CHECK(rep.verdict == Verdict::FeasibleSuboptimalBound);
  CHECK(std::abs(rep.x_star[0]) < 1e-4);

  // A point outside the feasible set is reported infeasible.
  ProblemData ring;
  ring.f = x(1, 0);
  ring.g = {power(x(1, 0), 2) - cst(1, 1.0)};
  ring.M = 4.0;
  const auto rdual = build_exact_socp_dual(ring, 2);
  RelaxationResult fake;
  fake.status = SolveStatus::Optimal;
  fake.value = 0.0;
  fake.report.z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rdual.conic.num_vars()));
  fake.report.z[0] = 1.0;
  const auto bad = recover_and_verify(ring, rdual, fake);
  CHECK(bad.verdict == Verdict::Infeasible);
  CHECK(bad.feasibility_residual == doctest::Approx(1.0));

  const auto primal = build_exact_socp(data, 4);
  CHECK_THROWS_AS(recover_and_verify(data, primal, res), std::invalid_argument);
}

TEST_CASE("grid oracle") {
  ProblemData data;
  data.f = power(x(2, 0) - cst(2, 0.3), 2) + power(x(2, 1) - cst(2, 0.5), 2);
  add_box(data, {{0.0, 0.0}, {1.0, 1.0}});
  const auto g = grid_minimum(data, 0.1);
  REQUIRE(g.found);
  CHECK(g.points == 121);
  CHECK(g.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.x[0] == doctest::Approx(0.3));
  CHECK(g.x[1] == doctest::Approx(0.5));

  data.g.push_back(x(2, 0) + x(2, 1) - cst(2, 3.0));
  CHECK_FALSE(grid_minimum(data, 0.1).found);

  const auto ep = grid_minimum(make_ep1(4), 0.125);
  REQUIRE(ep.found);
  CHECK(ep.value == doctest::Approx(0.0).epsilon(1e-12));

  ProblemData unboxed;
  unboxed.f = x(1, 0);
  CHECK_THROWS(grid_minimum(unboxed, 0.1));
}
