#include <cmath>
#include <random>

#include "doctest.h"

#include "bdcone/hierarchy/problems.hpp"
#include "bdcone/toolio/formats.hpp"
#include "bdcone/toolio/parser.hpp"
#include "bdcone/toolio/report.hpp"

using namespace bdcone;

namespace {

Polynomial x(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial cst(std::size_t n, double v) { return Polynomial::constant(n, v); }

ConicProblem random_problem(std::mt19937& rng, bool sdpa_safe) {
  std::uniform_int_distribution<int> kind(0, sdpa_safe ? 1 : 4);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::bernoulli_distribution sparse(0.4);
  ConicBuilder b;
  const int nblocks = 1 + dim(rng);
  for (int k = 0; k < nblocks; ++k) {
    switch (kind(rng)) {
      case 0: b.add_block({ConeKind::NonNeg, static_cast<std::size_t>(dim(rng))}); break;
      case 1: b.add_block({ConeKind::PSD, static_cast<std::size_t>(dim(rng))}); break;
      case 2: b.add_block({ConeKind::Free, static_cast<std::size_t>(dim(rng))}); break;
      case 3: b.add_block({ConeKind::SecondOrder, static_cast<std::size_t>(dim(rng) + 1)}); break;
      default: b.add_block({ConeKind::Zero, static_cast<std::size_t>(dim(rng))}); break;
    }
  }
  const std::size_t rows = static_cast<std::size_t>(dim(rng) + 1);
  const ConicProblem shape = b.build();
  for (std::size_t r = 0; r < rows; ++r) {
    b.add_row(sparse(rng) ? 0.0 : u(rng));
    for (std::size_t c = 0; c < shape.num_vars(); ++c) {
      if (sparse(rng)) b.add_coeff(r, c, u(rng));
    }
  }
  for (std::size_t c = 0; c < shape.num_vars(); ++c) {
    if (sparse(rng)) b.set_objective(c, u(rng));
  }
  return b.build();
}

bool same_problem(const ConicProblem& a, const ConicProblem& b) {
  if (!(a.cones.blocks() == b.cones.blocks())) return false;
  if (a.c != b.c || a.b != b.b) return false;
  return Eigen::MatrixXd(a.A) == Eigen::MatrixXd(b.A);
}

double solved_value(const ConicProblem& p) {
  SolveSettings s;
  s.tol = 1e-11;
  const auto rep = solve(p, s);
  REQUIRE(rep.status == SolveStatus::Optimal);
  return rep.primal_value;
}

}  // namespace

TEST_CASE("parse the two-variable example") {
  const auto src = parse_problem("vars x1 x2\nminimize: x1^4 - x2\nst: 1 - x1^4 - x2^4 >= 0");
  CHECK(src.vars == std::vector<std::string>{"x1", "x2"});
  CHECK_FALSE(src.maximize);
  const auto data = to_problem_data(src);
  const auto ref = make_socp_convex_example();
  CHECK(data.f == ref.f);
  REQUIRE(data.g.size() == 1);
  CHECK(data.g[0] == ref.g[0]);
  CHECK_FALSE(data.box);
}

TEST_CASE("parse without constraints") {
  const auto data = to_problem_data(parse_problem("vars x\nminimize: x"));
  CHECK(data.g.empty());
  CHECK(data.f == x(1, 0));
}

TEST_CASE("relations, maximize, boxes and options") {
  const auto src = parse_problem(
      "# comment\nvars a b\nmaximize: a*b - 2\nst: a + b <= 1.5\nst: a == b^2\n"
      "box a 0 1\nbox b -1 2\noption M 3\noption k 2\noption r 4\noption split 1,1\n");
  CHECK(src.maximize);
  const auto data = to_problem_data(src);
  const Polynomial a = x(2, 0), b = x(2, 1);
  CHECK(data.f == cst(2, 2.0) - a * b);
  REQUIRE(data.g.size() == 7);
  CHECK(data.g[0] == cst(2, 1.5) - a - b);
  CHECK(data.g[1] == a - power(b, 2));
  CHECK(data.g[2] == power(b, 2) - a);
  CHECK(data.g[3] == a);
  CHECK(data.g[6] == cst(2, 2.0) - b);
  REQUIRE(data.box);
  CHECK(data.box->lo == std::vector<double>{0.0, -1.0});
  CHECK(data.M == 3.0);
  const auto cfg = config_from_options(src);
  CHECK(cfg.k == 2);
  CHECK(cfg.r == 4);
  CHECK(cfg.n1 == 1);
  CHECK(cfg.n2 == 1);
}

TEST_CASE("expression precedence") {
  const std::vector<std::string> v{"x", "y"};
  CHECK(parse_polynomial("-x^2", v) == -1.0 * power(x(2, 0), 2));
  CHECK(parse_polynomial("2*(x + y)^2 - 3", v) == 2.0 * power(x(2, 0) + x(2, 1), 2) - cst(2, 3.0));
  CHECK(parse_polynomial("x - y - 1", v) == x(2, 0) - x(2, 1) - cst(2, 1.0));
  CHECK(parse_polynomial("(x^2)^3", v) == power(x(2, 0), 6));
  CHECK(parse_polynomial("0.5e1 * x", v) == 5.0 * x(2, 0));
  CHECK(expression_variables("x10 + x2*y - x1") == std::vector<std::string>{"x1", "x2", "x10", "y"});
}

TEST_CASE("parse errors carry positions") {
  auto error_at = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_problem(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(error_at("minimize: y").first == 1);
  CHECK(error_at("vars x\nminimize: y") == std::pair<std::size_t, std::size_t>{2, 11});
  CHECK(error_at("vars x\nminimize: x^1.5").first == 2);
  CHECK(error_at("vars x\nminimize: x^-2").first == 2);
  CHECK(error_at("vars x\nminimize: x^2^2").first == 2);
  CHECK(error_at("vars x\nminimize: (x").first == 2);
  CHECK(error_at("vars x\nminimize: x\nst: x > 0").first == 3);
  CHECK(error_at("vars x x\nminimize: x").first == 1);
  CHECK(error_at("vars st\nminimize: st").first == 1);
  CHECK(error_at("vars x\nminimize: x\nbox x 1 0").first == 3);
  CHECK(error_at("vars x\nminimize: x\noption split 1").first == 3);
  CHECK_THROWS_AS(parse_polynomial("x +", {"x"}), ParseError);
}

TEST_CASE("print then parse is the identity") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int t = 0; t < 200; ++t) {
    ProblemSource src;
    const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
    for (std::size_t i = 0; i < n; ++i) src.vars.push_back("v" + std::to_string(i + 1));
    auto random_poly = [&]() {
      Polynomial p(n);
      for (int k = 0; k < 4; ++k) {
        std::vector<int> e(n);
        for (auto& p_i : e) p_i = deg(rng);
        p.add_term(Exponent(std::move(e)), u(rng));
      }
      return p;
    };
    src.maximize = t % 3 == 0;
    src.objective = random_poly();
    for (int c = 0; c < t % 3; ++c) {
      src.constraints.push_back({random_poly(), static_cast<Relation>(c % 3), random_poly()});
    }
    if (t % 2) src.boxes.push_back({0, -u(rng) * u(rng), 200.0});
    if (t % 5 == 0) src.options.M = std::abs(u(rng)) + 1.0;
    if (t % 7 == 0) src.options.split = std::pair<std::size_t, std::size_t>{n, 0};
    const auto text = print_problem(src);
    CHECK(parse_problem(text) == src);
    CHECK(print_problem(parse_problem(text)) == text);
  }
}

TEST_CASE("format_double round-trips") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 200; ++t) {
    const double v = u(rng) / (1.0 + t);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("CBF round trip") {
  std::mt19937 rng(17);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_problem(rng, false);
    const std::string text = to_cbf(p);
    const auto q = from_cbf(text);
    CHECK(same_problem(p, q));
    CHECK(to_cbf(q) == text);
  }
}

TEST_CASE("SDPA round trip") {
  std::mt19937 rng(23);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_problem(rng, true);
    const std::string text = to_sdpa(p);
    const auto q = from_sdpa(text);
    CHECK(same_problem(p, q));
    CHECK(to_sdpa(q) == text);
  }
}

TEST_CASE("SDPA rejects second-order blocks without the rewrite") {
  const auto bundle = build_exact_socp(make_socp_convex_example(), 4);
  CHECK_THROWS_AS(to_sdpa(bundle.conic), std::invalid_argument);
  CHECK_NOTHROW(to_sdpa(bundle.conic, {true}));
  ConicBuilder b;
  b.add_block({ConeKind::SecondOrder, 4});
  CHECK_THROWS_AS(to_sdpa(b.build(), {true}), std::invalid_argument);
}

TEST_CASE("exported relaxation solves to the same value") {
  const auto bundle = build_exact_socp(make_socp_convex_example(), 4);
  const double v = solved_value(bundle.conic);
  CHECK(solved_value(from_cbf(to_cbf(bundle.conic))) == doctest::Approx(v).epsilon(1e-8));
  CHECK(solved_value(from_sdpa(to_sdpa(bundle.conic, {true}))) == doctest::Approx(v).epsilon(1e-8));
  CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("malformed files are rejected") {
  CHECK_THROWS_AS(from_cbf("VER\n3\nOBJSENSE\nMAX\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_cbf("VER\n3\nVAR\n2 1\nL+ 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_sdpa("1\n1\n2\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_sdpa("1\n1\n-2\n1\n1 1 1 2 1.0\n"), std::invalid_argument);
  CHECK_THROWS(load_text("/nonexistent/file"));
}

TEST_CASE("reports are deterministic without timings") {
  const auto data = make_socp_convex_example();
  const auto bundle = build_exact_socp_dual(data, 4);
  auto run = [&]() {
    const auto res = solve_relaxation(bundle);
    nlohmann::ordered_json body;
    body["problem"] = problem_json(data);
    body["levels"] = nlohmann::ordered_json::array({level_json(bundle, data, res, false)});
    return dump_report(make_report("solve", body));
  };
  const auto a = run();
  CHECK(a == run());
  const auto j = nlohmann::json::parse(a);
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["levels"][0]["status"] == "optimal");
  CHECK_FALSE(j["levels"][0].contains("seconds"));
  CHECK(j["levels"][0]["decoded"].contains("moments"));
  CHECK(j["levels"][0]["fingerprint"].get<std::string>().size() == 16);
  CHECK(json_number(-INFINITY) == "-inf");
}
