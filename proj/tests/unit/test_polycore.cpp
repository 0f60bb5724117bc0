#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

#include "bdcone/kernels/kernels.hpp"
#include "bdcone/polycore/krivine.hpp"
#include "bdcone/polycore/monomial_basis.hpp"
#include "bdcone/polycore/polynomial.hpp"

using namespace bdcone;

namespace {

Polynomial x(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial one(std::size_t n) { return Polynomial::constant(n, 1.0); }

Polynomial random_poly(std::mt19937_64& rng, std::size_t n, int d, double density = 0.5) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  Polynomial p(n);
  for (const auto& e : MonomialBasis(n, d)) {
    if (keep(rng)) p.add_term(e, coef(rng));
  }
  return p;
}

std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& t : v) t = u(rng);
  return v;
}

}  // namespace

TEST_CASE("basis_size") {
  CHECK(basis_size(2, 2) == 6);
  CHECK(basis_size(7, 0) == 1);
  CHECK(basis_size(0, 5) == 1);
  std::size_t count = 0;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      for (int c = 0; a + b + c <= 4; ++c) ++count;
  CHECK(basis_size(3, 4) == count);
  CHECK(count == 35);
  CHECK_THROWS_AS(basis_size(1000000, 1000), std::overflow_error);
  CHECK_THROWS_AS(basis_size(2, -1), std::invalid_argument);
}

TEST_CASE("monomial basis order and round trip") {
  const MonomialBasis b(2, 4);
  REQUIRE(b.size() == 15);
  const std::vector<Exponent> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                                        {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
                                        {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(b.exponent_at(i) == expect[i]);
  const MonomialBasis big(4, 5);
  for (std::size_t i = 0; i < big.size(); ++i) CHECK(big.index_of(big.exponent_at(i)) == i);
  CHECK_THROWS_AS(b.index_of(Exponent{5, 0}), std::out_of_range);
  CHECK(MonomialBasis(3, 2).exponent_at(2) == Exponent{0, 1, 0});
}

TEST_CASE("embed") {
  const MonomialBasis b(1, 2);
  const auto first = embed(b, BlockPosition::kFirst, 1, 1);
  const auto second = embed(b, BlockPosition::kSecond, 1, 1);
  CHECK(first[2] == Exponent{2, 0});
  CHECK(second[2] == Exponent{0, 2});
  CHECK(first[0].is_zero());
  CHECK(second[0].is_zero());
  CHECK_THROWS_AS(embed(b, BlockPosition::kFirst, 2, 1), std::invalid_argument);
}

TEST_CASE("evaluate") {
  const Polynomial f = power(x(2, 0), 4) - x(2, 1);
  const std::vector<double> p{0.0, 1.0};
  CHECK(evaluate(f, p) == -1.0);
  CHECK(evaluate(one(3), std::vector<double>{0.3, -2.0, 7.0}) == 1.0);
  Polynomial ep1(5);
  for (std::size_t i = 0; i < 5; ++i) ep1 += power(x(5, i), 4);
  ep1 -= 5.0 * (x(5, 0) * x(5, 1) * x(5, 2) * x(5, 3));
  CHECK(evaluate(ep1, std::vector<double>{0.5, 0.5, 0.5, 0.5, 0.0}) ==
        doctest::Approx(-1.0 / 16.0).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate(f, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("arithmetic") {
  const Polynomial x1 = x(1, 0);
  CHECK(mul(x1 + one(1), x1 - one(1)) == power(x1, 2) - one(1));
  const Polynomial gh = 0.5 * x1;
  CHECK(power(gh, 0) == one(1));
  CHECK(mul(gh, one(1) - gh) == 0.5 * x1 - 0.25 * power(x1, 2));
  CHECK((x1 - x1).is_zero());
  CHECK((x1 - x1).degree() == 0);
  CHECK_THROWS_AS(add(x1, x(2, 0)), std::invalid_argument);
}

TEST_CASE("gradient") {
  const Polynomial x1 = x(2, 0), x2 = x(2, 1);
  auto g = gradient(power(x(1, 0), 4));
  CHECK(g[0] == 4.0 * power(x(1, 0), 3));
  g = gradient(x1 * x2);
  CHECK(g[0] == x2);
  CHECK(g[1] == x1);
  const Polynomial f = power(x1, 4) + power(x2, 4) - 2.0 * power(x1, 2) * power(x2, 2);
  g = gradient(f);
  CHECK(g[0] == 4.0 * power(x1, 3) - 4.0 * x1 * power(x2, 2));
  CHECK(g[1] == 4.0 * power(x2, 3) - 4.0 * power(x1, 2) * x2);
}

TEST_CASE("scale_constraints and homogenize") {
  const std::vector<Polynomial> g{2.0 * x(1, 0)};
  CHECK(scale_constraints(g, 2.0)[0] == x(1, 0));
  Polynomial ball = one(3);
  for (std::size_t i = 0; i < 3; ++i) ball -= power(x(3, i), 2);
  const std::vector<Polynomial> gb{ball};
  Polynomial half = 0.5 * one(3);
  for (std::size_t i = 0; i < 3; ++i) half -= 0.5 * power(x(3, i), 2);
  CHECK(scale_constraints(gb, 2.0)[0] == half);
  CHECK_THROWS_AS(scale_constraints(g, 0.0), std::invalid_argument);

  const Polynomial f = power(x(1, 0), 2) + x(1, 0) + one(1);
  const Polynomial t = x(2, 1), x1 = x(2, 0);
  CHECK(homogenize(f) == power(x1, 2) + x1 * t + power(t, 2));
  const Polynomial e = power(x(2, 0), 4) - x(2, 1);
  CHECK(homogenize(e) == power(x(3, 0), 4) - x(3, 1) * power(x(3, 2), 3));
  CHECK(homogenize(power(x(1, 0), 3)) == power(x(2, 0), 3));
}

TEST_CASE("krivine products") {
  const std::vector<Polynomial> g1{0.5 * x(1, 0)};
  auto k1 = krivine_products(g1, 1);
  REQUIRE(k1.size() == 3);
  CHECK(k1[0].h == one(1));
  CHECK(k1[1].h == g1[0]);
  CHECK(k1[2].h == one(1) - g1[0]);
  const std::vector<Polynomial> g2{x(2, 0), x(2, 1)};
  CHECK(krivine_products(g2, 2).size() == 15);
  auto k2 = krivine_products(g1, 2);
  std::set<std::string> found;
  for (const auto& t : k2) found.insert(t.h.to_string());
  CHECK(found.count((0.25 * power(x(1, 0), 2)).to_string()) == 1);
  CHECK(found.count((0.5 * x(1, 0) - 0.25 * power(x(1, 0), 2)).to_string()) == 1);
  CHECK(krivine_products(std::vector<Polynomial>{}, 3, 2).size() == 1);
}

TEST_CASE("krivine product count and degree bound") {
  std::mt19937_64 rng(11);
  for (std::size_t m = 0; m <= 3; ++m) {
    for (int k = 0; k <= 3; ++k) {
      std::vector<Polynomial> g;
      int maxdeg = 0;
      for (std::size_t i = 0; i < m; ++i) {
        g.push_back(random_poly(rng, 2, 2));
        maxdeg = std::max(maxdeg, g.back().degree());
      }
      const auto prods = krivine_products(g, k, 2);
      CHECK(prods.size() == basis_size(2 * m, k));
      for (const auto& t : prods) {
        int order = 0;
        for (std::size_t i = 0; i < m; ++i) order += t.p[i] + t.q[i];
        CHECK(t.h.degree() <= order * maxdeg);
      }
    }
  }
}

TEST_CASE("parallel krivine kernel matches serial bit for bit") {
  std::mt19937_64 rng(5);
  std::vector<Polynomial> g;
  for (int i = 0; i < 4; ++i) g.push_back(random_poly(rng, 3, 2, 0.7));
  const auto a = kernels::serial::krivine_products(g, 3, 3);
  const auto b = kernels::parallel::krivine_products(g, 3, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].p == b[i].p);
    CHECK(a[i].q == b[i].q);
    CHECK(a[i].h == b[i].h);
  }
}

TEST_CASE("product evaluates to product of evaluations") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const Polynomial f = random_poly(rng, n, 4);
    const Polynomial g = random_poly(rng, n, 4);
    const auto pt = random_point(rng, n, -1.5, 1.5);
    const double lhs = evaluate(mul(f, g), pt);
    const double rhs = evaluate(f, pt) * evaluate(g, pt);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("homogenization at t = 1") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const Polynomial f = random_poly(rng, n, 5);
    auto pt = random_point(rng, n, -2.0, 2.0);
    const double fx = evaluate(f, pt);
    pt.push_back(1.0);
    CHECK(evaluate(homogenize(f), pt) == fx);
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(3);
  const double h = 1e-5;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const Polynomial f = random_poly(rng, n, 6);
    const auto grad = gradient(f);
    const auto pt = random_point(rng, n, -1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto up = pt, dn = pt;
      up[i] += h;
      dn[i] -= h;
      const double fd = (evaluate(f, up) - evaluate(f, dn)) / (2 * h);
      const double exact = evaluate(grad[i], pt);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}
