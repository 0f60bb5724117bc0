#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdcone/certcones/classify.hpp"
#include "bdcone/hierarchy/moments.hpp"
#include "bdcone/hierarchy/problem_data.hpp"
#include "bdcone/hierarchy/relaxation.hpp"

namespace bdcone {

/// x_i = L_y(x_i). Throws std::invalid_argument unless |y_0 - 1| <= 1e-9.
std::vector<double> extract_point(const MomentVector& y);

/// Largest violation of the pairwise conditions
/// |(2 M_ij, M_ii - M_jj)| <= M_ii + M_jj on M_l(y), l = degree(y) / 2.
double pairwise_moment_violation(const MomentVector& y);

struct JensenReport {
  /// L_y(f) and f(extract_point(y)).
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// Preconditions: y_0 = 1, the pairwise moment conditions within 1e-8, and
  /// (when checked) f SOCP-convex.
  bool preconditions = false;
  double moment_violation = 0.0;
  Answer socp_convex = Answer::Inconclusive;
  std::string detail;
};

/// Evaluates both sides of L_y(f) >= f(L_y(x)). `holds` is lhs >= rhs - 1e-8.
/// With `verify_convexity` false the SOCP-convexity of f is taken as given.
JensenReport jensen_check(const Polynomial& f, const MomentVector& y, bool verify_convexity = true);

enum class Verdict { CertifiedOptimal, FeasibleSuboptimalBound, Infeasible };

std::string to_string(Verdict verdict);

struct RecoveryOptions {
  double feasibility_tol = 1e-6;
  double value_tol = 1e-5;
  /// Strictly feasible point for the Slater hypothesis. When absent the
  /// origin and the extracted point are tried.
  std::optional<std::vector<double>> slater_point;
  SolveSettings settings;
};

struct RecoveryReport {
  std::vector<double> x_star;
  /// max_i max(0, -g_i(x*)), including the cone constraint when present.
  double feasibility_residual = 0.0;
  /// |f(x*) - relaxation value|.
  double objective_gap = 0.0;
  double value = 0.0;
  double f_at_x = 0.0;
  Verdict verdict = Verdict::Infeasible;
  /// f and every -g_i SOCP-convex, and a Slater point found.
  bool hypotheses = false;
  std::vector<std::string> notes;
};

/// Extracts x* from a solved dual-side relaxation and grades it. Throws
/// std::invalid_argument when the relaxation is not a solved dual.
RecoveryReport recover_and_verify(const ProblemData& data, const RelaxationBundle& dual,
                                  const RelaxationResult& result, const RecoveryOptions& options = {});

struct GridResult {
  bool found = false;
  double value = 0.0;
  std::vector<double> x;
  std::size_t points = 0;
};

/// Brute-force minimum of f over the feasible grid points of the box with the
/// given step. Requires data.box. Feasibility is g_i(x) >= -1e-12.
GridResult grid_minimum(const ProblemData& data, double step);

}  // namespace bdcone
