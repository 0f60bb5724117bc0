#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bdcone/conic/problem.hpp"
#include "bdcone/conic/solver.hpp"

using namespace bdcone;

TEST_CASE("nonnegative: min x s.t. x - s = 1") {
  ConicBuilder b;
  const auto x = b.add_block({ConeKind::NonNeg, 2});
  const auto r = b.add_row(1.0);
  b.add_coeff(r, x, 1.0);
  b.add_coeff(r, x + 1, -1.0);
  b.set_objective(x, 1.0);
  const auto rep = solve(b.build());
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(rep.primal_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.residuals.max() <= 1e-8);
}

TEST_CASE("second order: min t s.t. (t, 3, 4) in SOC") {
  ConicBuilder b;
  const auto z = b.add_block({ConeKind::SecondOrder, 3});
  b.add_coeff(b.add_row(3.0), z + 1, 1.0);
  b.add_coeff(b.add_row(4.0), z + 2, 1.0);
  b.set_objective(z, 1.0);
  const auto rep = solve(b.build());
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(std::abs(rep.primal_value - 5.0) <= 1e-6);
}

TEST_CASE("psd: min trace X s.t. X11 = X22 = 1, X12 = 0.9") {
  ConicBuilder b;
  const auto x = b.add_block({ConeKind::PSD, 2});
  b.add_coeff(b.add_row(1.0), x + psd_vec_index(0, 0, 2), 1.0);
  b.add_coeff(b.add_row(1.0), x + psd_vec_index(1, 1, 2), 1.0);
  b.add_coeff(b.add_row(0.9), x + psd_vec_index(1, 0, 2), 1.0 / std::numbers::sqrt2);
  b.set_objective(x + psd_vec_index(0, 0, 2), 1.0);
  b.set_objective(x + psd_vec_index(1, 1, 2), 1.0);
  const auto rep = solve(b.build());
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(std::abs(rep.primal_value - 2.0) <= 1e-6);
}

TEST_CASE("primal infeasible: x = -1, x >= 0") {
  ConicBuilder b;
  const auto x = b.add_block({ConeKind::NonNeg, 1});
  b.add_coeff(b.add_row(-1.0), x, 1.0);
  b.set_objective(x, 1.0);
  const auto rep = solve(b.build());
  CHECK(rep.status == SolveStatus::PrimalInfeasible);
  CHECK(std::isinf(rep.primal_value));
  CHECK(rep.primal_value > 0);
}

TEST_CASE("dual infeasible: min -x s.t. x - y = 0, x, y >= 0") {
  ConicBuilder b;
  const auto x = b.add_block({ConeKind::NonNeg, 2});
  const auto r = b.add_row(0.0);
  b.add_coeff(r, x, 1.0);
  b.add_coeff(r, x + 1, -1.0);
  b.set_objective(x, -1.0);
  const auto rep = solve(b.build());
  CHECK(rep.status == SolveStatus::DualInfeasible);
  CHECK(rep.primal_value < 0);
}

TEST_CASE("free variables and mixed blocks") {
  // min u + t s.t. u - w = 2, t >= |(u, 1)|, w >= 0 ; optimum at u = 2.
  ConicBuilder b;
  const auto u = b.add_block({ConeKind::Free, 1});
  const auto w = b.add_block({ConeKind::NonNeg, 1});
  const auto q = b.add_block({ConeKind::SecondOrder, 3});
  const auto r0 = b.add_row(2.0);
  b.add_coeff(r0, u, 1.0);
  b.add_coeff(r0, w, -1.0);
  const auto r1 = b.add_row(0.0);
  b.add_coeff(r1, q + 1, 1.0);
  b.add_coeff(r1, u, -1.0);
  b.add_coeff(b.add_row(1.0), q + 2, 1.0);
  b.set_objective(u, 1.0);
  b.set_objective(q, 1.0);
  const auto rep = solve(b.build());
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(std::abs(rep.primal_value - (2.0 + std::sqrt(5.0))) <= 1e-6);
  const auto res = compute_residuals(b.build(), rep.z, rep.lambda, rep.s);
  CHECK(res.max() <= 1e-8);
}

TEST_CASE("serial and parallel kernels give identical solves") {
  ConicBuilder b;
  const auto x = b.add_block({ConeKind::PSD, 3});
  for (std::size_t i = 0; i < 3; ++i) b.add_coeff(b.add_row(1.0), x + psd_vec_index(i, i, 3), 1.0);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = j + 1; i < 3; ++i) b.set_objective(x + psd_vec_index(i, j, 3), 1.0);
  SolveSettings s1, s2;
  s2.parallel = false;
  const auto a = solve(b.build(), s1);
  const auto c = solve(b.build(), s2);
  REQUIRE(a.status == SolveStatus::Optimal);
  CHECK(a.iterations == c.iterations);
  CHECK(a.primal_value == c.primal_value);
  // min sum_{i<j} sqrt2 X_ij with unit diagonal: X = (3/2) I - (1/2) 11'.
  CHECK(std::abs(a.primal_value + 1.5 * std::numbers::sqrt2) <= 1e-6);
}
