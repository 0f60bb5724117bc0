#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "bdcone/conic/problem.hpp"

namespace bdcone {

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, Inconclusive };

std::string to_string(SolveStatus status);

struct SolveSettings {
  double tol = 1e-8;
  std::size_t max_iter = 200000;
  /// Over-relaxation factor in (0, 2).
  double alpha = 1.5;
  /// Relative weight of the primal against the dual residual.
  double scale = 1.0;
  int equilibration_passes = 25;
  /// Rebalances the scaling of b against c from the residual ratio.
  bool adaptive_scale = true;
  /// Residuals are evaluated every `check_every` iterations.
  std::size_t check_every = 10;
  /// Anderson acceleration memory; 0 disables it.
  int anderson_memory = 10;
  /// Use the OpenMP kernels; false runs the serial reference kernels.
  bool parallel = true;
  /// Wall-clock limit in seconds; 0 means none.
  double time_limit = 0.0;
  bool verbose = false;
};

/// Relative residuals of a candidate primal/dual pair, in infinity norms:
/// primal |Az - b| / (1 + |b|), dual |c - A'lambda - s| / (1 + |c|),
/// gap |c'z - b'lambda| / (1 + |c'z|).
struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double max() const;
};

struct SolveReport {
  SolveStatus status = SolveStatus::Inconclusive;
  /// c'z and b'lambda. +inf for PrimalInfeasible, -inf for DualInfeasible.
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// Primal point (or an improving ray when DualInfeasible).
  Eigen::VectorXd z;
  /// Equality multipliers (or a Farkas ray when PrimalInfeasible).
  Eigen::VectorXd lambda;
  /// Dual slack c - A'lambda, in the dual cone.
  Eigen::VectorXd s;
  Residuals residuals;
  /// Normalized residual of the infeasibility certificate, when one is reported.
  double certificate_residual = 0.0;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

SolveReport solve(const ConicProblem& problem, const SolveSettings& settings = {});

/// Residuals of (z, lambda, s) on `problem`, without cone checks.
Residuals compute_residuals(const ConicProblem& problem, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& lambda, const Eigen::VectorXd& s);

}  // namespace bdcone
