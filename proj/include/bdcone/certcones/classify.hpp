#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "bdcone/certcones/gram.hpp"
#include "bdcone/conic/solver.hpp"
#include "bdcone/polycore/polynomial.hpp"

namespace bdcone {

enum class ClassKind { SDSOS, SOS, SOCPConvex, EssentiallyNonpositive, None };

/// Membership answers are never coerced: a solve that neither converges nor
/// certifies infeasibility is Inconclusive.
enum class Answer { Yes, No, Inconclusive };

std::string to_string(ClassKind kind);
std::string to_string(Answer answer);

struct ClassReport {
  /// Class established by the check; None unless answer is Yes.
  ClassKind kind = ClassKind::None;
  Answer answer = Answer::Inconclusive;
  std::optional<SdsosWitness> witness;
  /// PSD Gram matrix and its basis for SOS answers.
  Eigen::MatrixXd gram;
  std::vector<Exponent> gram_basis;
  /// Offending term or reason for negative and inconclusive answers.
  std::string detail;
  SolveStatus status = SolveStatus::Optimal;
  Residuals residuals;
  double certificate_residual = 0.0;
  /// Largest coefficient error of the reconstructed certificate.
  double reconstruction_error = 0.0;
  std::size_t iterations = 0;
};

ClassReport is_sdsos(const Polynomial& f, const SolveSettings& settings = {});
ClassReport is_sos(const Polynomial& f, const SolveSettings& settings = {});

/// h_f(x, y) = f(x) - f(y) - grad f(y)'(x - y) in 2n variables (x first).
Polynomial jensen_gap(const Polynomial& f);

/// SOCP-convex iff h_f is SDSOS.
ClassReport is_socp_convex(const Polynomial& f, const SolveSettings& settings = {});

/// Positive iff every coefficient outside the constant term and the pure
/// powers x_i^d (d = degree f) is <= 0.
ClassReport enc_detect(const Polynomial& f);

/// sum_i f_{d,i} x_i^d - sum_{p in Delta_f} |f_p| x^p.
Polynomial fhat(const Polynomial& f);

/// SDSOS check of the homogenization of f. Throws std::invalid_argument when
/// f does not have essentially nonpositive coefficients.
ClassReport enc_sdsos_check(const Polynomial& f, const SolveSettings& settings = {});

}  // namespace bdcone
