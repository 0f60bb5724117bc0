#include "bdcone/recovery/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bdcone/certcones/classify.hpp"

namespace bdcone {

namespace {

constexpr double kUnitTol = 1e-9;
constexpr double kJensenSlack = 1e-8;
constexpr double kMomentTol = 1e-8;
constexpr double kNormalizeTol = 1e-6;

Exponent unit(std::size_t n, std::size_t i) {
  std::vector<int> e(n, 0);
  e[i] = 1;
  return Exponent(std::move(e));
}

double cone_violation(const ConeConstraint& cone, std::span<const double> x) {
  if (cone.set == ConeSet::Orthant) {
    double worst = 0.0;
    for (const auto& e : cone.entries) worst = std::max(worst, -evaluate(e, x));
    return worst;
  }
  Eigen::MatrixXd g(static_cast<Eigen::Index>(cone.side), static_cast<Eigen::Index>(cone.side));
  for (std::size_t i = 0; i < cone.side; ++i) {
    for (std::size_t j = 0; j < cone.side; ++j) {
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(cone.at(i, j), x);
    }
  }
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
  return std::max(0.0, -lmin);
}

double min_constraint(const ProblemData& data, std::span<const double> x) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& gi : data.g) lo = std::min(lo, evaluate(gi, x));
  return lo;
}

// Flat term list for repeated evaluation on a grid.
struct FlatPoly {
  struct Term {
    double coeff;
    std::vector<std::pair<std::size_t, int>> factors;
  };
  std::vector<Term> terms;

  explicit FlatPoly(const Polynomial& f) {
    for (const auto& [e, c] : f.terms()) {
      Term t{c, {}};
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] > 0) t.factors.emplace_back(i, e[i]);
      }
      terms.push_back(std::move(t));
    }
  }

  // pw[i][p] = x_i^p.
  double eval(const std::vector<std::vector<double>>& pw) const {
    double s = 0.0;
    for (const auto& t : terms) {
      double v = t.coeff;
      for (const auto& [i, p] : t.factors) v *= pw[i][static_cast<std::size_t>(p)];
      s += v;
    }
    return s;
  }
};

struct GridBest {
  bool found = false;
  double value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx;
  std::size_t points = 0;
};

}  // namespace

std::vector<double> extract_point(const MomentVector& y) {
  if (y.y.size() == 0 || std::abs(y.y[0] - 1.0) > kUnitTol) {
    throw std::invalid_argument("extract_point: y_0 must equal 1");
  }
  const std::size_t n = y.nvars();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y.at(unit(n, i));
  return x;
}

double pairwise_moment_violation(const MomentVector& y) {
  const Eigen::MatrixXd m = moment_matrix(y, y.degree() / 2);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    worst = std::max(worst, -m(i, i));
    for (Eigen::Index j = i + 1; j < m.rows(); ++j) {
      const double lhs = std::hypot(2.0 * m(i, j), m(i, i) - m(j, j));
      worst = std::max(worst, lhs - (m(i, i) + m(j, j)));
    }
  }
  return worst;
}

JensenReport jensen_check(const Polynomial& f, const MomentVector& y, bool verify_convexity) {
  JensenReport rep;
  std::vector<std::string> problems;
  if (y.y.size() == 0 || std::abs(y.y[0] - 1.0) > kUnitTol) problems.push_back("y_0 != 1");
  rep.moment_violation = pairwise_moment_violation(y);
  if (rep.moment_violation > kMomentTol) problems.push_back("pairwise moment conditions violated");
  if (verify_convexity) {
    rep.socp_convex = is_socp_convex(f).answer;
    if (rep.socp_convex != Answer::Yes) {
      problems.push_back("f not certified SOCP-convex (" + to_string(rep.socp_convex) + ")");
    }
  } else {
    rep.socp_convex = Answer::Yes;
  }
  rep.preconditions = problems.empty();
  for (std::size_t i = 0; i < problems.size(); ++i) {
    rep.detail += (i ? "; " : "") + problems[i];
  }
  rep.lhs = riesz(y, f);
  const std::size_t n = y.nvars();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y.at(unit(n, i));
  rep.rhs = evaluate(f, x);
  rep.holds = rep.lhs >= rep.rhs - kJensenSlack;
  return rep;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::CertifiedOptimal: return "certified-optimal";
    case Verdict::FeasibleSuboptimalBound: return "feasible-suboptimal-bound";
    case Verdict::Infeasible: return "infeasible";
  }
  return "unknown";
}

RecoveryReport recover_and_verify(const ProblemData& data, const RelaxationBundle& dual,
                                  const RelaxationResult& result, const RecoveryOptions& options) {
  if (!is_dual(dual.meta.kind)) throw std::invalid_argument("recover_and_verify: not a dual relaxation");
  if (result.status != SolveStatus::Optimal) {
    throw std::invalid_argument("recover_and_verify: dual not solved (" + to_string(result.status) + ")");
  }
  RecoveryReport rep;
  MomentVector y = decode_moments(dual, result.report.z);
  if (std::abs(y.y[0] - 1.0) > kNormalizeTol) {
    throw std::invalid_argument("recover_and_verify: dual solution has y_0 far from 1");
  }
  y.y /= y.y[0];
  rep.x_star = extract_point(y);
  rep.value = result.value;
  rep.f_at_x = evaluate(data.f, rep.x_star);
  rep.objective_gap = std::abs(rep.f_at_x - rep.value);
  rep.feasibility_residual = std::max(0.0, -min_constraint(data, rep.x_star));
  if (data.cone) rep.feasibility_residual = std::max(rep.feasibility_residual, cone_violation(*data.cone, rep.x_star));

  bool convex = is_socp_convex(data.f, options.settings).answer == Answer::Yes;
  if (!convex) rep.notes.push_back("f not certified SOCP-convex");
  for (std::size_t i = 0; i < data.g.size() && convex; ++i) {
    if (is_socp_convex(-data.g[i], options.settings).answer != Answer::Yes) {
      convex = false;
      rep.notes.push_back("-g" + std::to_string(i + 1) + " not certified SOCP-convex");
    }
  }
  if (data.cone) {
    convex = false;
    rep.notes.push_back("cone constraint present");
  }
  std::vector<std::vector<double>> candidates;
  if (options.slater_point) {
    candidates.push_back(*options.slater_point);
  } else {
    candidates.emplace_back(data.nvars(), 0.0);
    candidates.push_back(rep.x_star);
  }
  bool slater = data.g.empty();
  for (const auto& c : candidates) {
    if (c.size() == data.nvars() && min_constraint(data, c) > 0.0) slater = true;
  }
  if (!slater) rep.notes.push_back("no Slater point found");
  rep.hypotheses = convex && slater;

  if (rep.feasibility_residual > options.feasibility_tol) {
    rep.verdict = Verdict::Infeasible;
  } else if (rep.hypotheses && rep.objective_gap <= options.value_tol * (1.0 + std::abs(rep.value))) {
    rep.verdict = Verdict::CertifiedOptimal;
  } else {
    rep.verdict = Verdict::FeasibleSuboptimalBound;
  }
  return rep;
}

GridResult grid_minimum(const ProblemData& data, double step) {
  if (!data.box) throw std::invalid_argument("grid_minimum: problem has no box");
  if (!(step > 0.0)) throw std::invalid_argument("grid_minimum: step must be positive");
  const std::size_t n = data.nvars();
  const Box& box = *data.box;
  std::vector<std::size_t> steps(n);
  for (std::size_t i = 0; i < n; ++i) {
    steps[i] = static_cast<std::size_t>(std::llround(std::max(0.0, box.hi[i] - box.lo[i]) / step));
  }
  auto coord = [&](std::size_t i, std::size_t k) {
    return steps[i] == 0 ? box.lo[i]
                         : box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(k) /
                                           static_cast<double>(steps[i]);
  };
  int maxdeg = data.f.degree();
  for (const auto& gi : data.g) maxdeg = std::max(maxdeg, gi.degree());
  const FlatPoly f(data.f);
  std::vector<FlatPoly> g;
  for (const auto& gi : data.g) g.emplace_back(gi);

  GridResult out;
  if (n == 0) {
    out.found = true;
    out.value = data.f.constant_term();
    out.points = 1;
    return out;
  }
  const std::size_t outer = steps[0] + 1;
  std::vector<GridBest> best(outer);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k0 = 0; k0 < outer; ++k0) {
    std::vector<std::size_t> idx(n, 0);
    idx[0] = k0;
    std::vector<std::vector<double>> pw(n, std::vector<double>(static_cast<std::size_t>(maxdeg) + 1, 1.0));
    auto set_coord = [&](std::size_t i) {
      const double x = coord(i, idx[i]);
      for (std::size_t p = 1; p < pw[i].size(); ++p) pw[i][p] = pw[i][p - 1] * x;
    };
    for (std::size_t i = 0; i < n; ++i) set_coord(i);
    GridBest& b = best[k0];
    while (true) {
      ++b.points;
      bool feasible = true;
      for (const auto& gi : g) {
        if (gi.eval(pw) < -1e-12) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        const double v = f.eval(pw);
        if (v < b.value) {
          b.found = true;
          b.value = v;
          b.idx = idx;
        }
      }
      std::size_t i = n - 1;
      while (i > 0 && idx[i] == steps[i]) {
        idx[i] = 0;
        set_coord(i);
        --i;
      }
      if (i == 0) break;
      ++idx[i];
      set_coord(i);
    }
  }
  for (const auto& b : best) {
    out.points += b.points;
    if (b.found && (!out.found || b.value < out.value)) {
      out.found = true;
      out.value = b.value;
      out.x.resize(n);
      for (std::size_t i = 0; i < n; ++i) out.x[i] = coord(i, b.idx[i]);
    }
  }
  return out;
}

}  // namespace bdcone
