#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bdcone/certcones/gram.hpp"
#include "bdcone/conic/problem.hpp"
#include "bdcone/conic/solver.hpp"
#include "bdcone/hierarchy/moments.hpp"
#include "bdcone/hierarchy/problem_data.hpp"
#include "bdcone/polycore/krivine.hpp"

namespace bdcone {

enum class RelaxationKind { Primal, Dual, ExactSocp, ExactSocpDual, Crp, CrpDual };

std::string to_string(RelaxationKind kind);
bool is_dual(RelaxationKind kind);

/// A named column range of the conic program.
struct DecoderEntry {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
};

struct Decoder {
  std::vector<DecoderEntry> entries;

  /// Throws std::out_of_range for an unknown name.
  const DecoderEntry& at(const std::string& name) const;
  bool has(const std::string& name) const;
  /// Entries are contiguous, disjoint, and cover [0, ncols).
  bool covers(std::size_t ncols) const;
};

struct RelaxationMeta {
  RelaxationKind kind = RelaxationKind::Primal;
  /// +1 when the relaxation value is the conic minimum, -1 when it is its
  /// negation (the certificate side maximizes mu).
  int sense = 1;
  HierarchyConfig config;
  /// Degree of the coefficient rows (primal) or of the moment vector (dual).
  int degree = 0;
  double M = 1.0;
  std::uint64_t fingerprint = 0;
};

/// A compiled relaxation. `multipliers` are the polynomials with nonnegative
/// weights (Krivine products, or raw g_i for the exact relaxation); `rows` is
/// the coefficient basis (primal) or moment basis (dual).
struct RelaxationBundle {
  ConicProblem conic;
  Decoder decoder;
  RelaxationMeta meta;
  MonomialBasis rows;
  std::vector<Polynomial> multipliers;
  /// (p, q) of each multiplier; empty for the exact relaxation.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> products;
  GramLayout gram;
  std::optional<ConeConstraint> cone;
};

/// Certificate side at level k: max mu subject to
/// f - sum c_pq h_pq - mu = sigma_1 + sigma_2 coefficientwise up to D_match.
RelaxationBundle build_primal(const ProblemData& data, const HierarchyConfig& cfg);

/// Moment side at level k: min L_y(f) subject to y_0 = 1, L_y(h_pq) >= 0,
/// M^{X1}(y) PSD and the 2x2 conditions on M^{X2}(y).
RelaxationBundle build_dual(const ProblemData& data, const HierarchyConfig& cfg);

/// max mu subject to f - sum lambda_i g_i - mu SDSOS of degree d, lambda >= 0.
RelaxationBundle build_exact_socp(const ProblemData& data, int d);
RelaxationBundle build_exact_socp_dual(const ProblemData& data, int d);

/// build_primal with the extra term <lambda, G(x)>, lambda in the dual cone
/// of S. Throws std::invalid_argument when data.cone is absent.
RelaxationBundle build_crp(const ProblemData& data, const HierarchyConfig& cfg);
RelaxationBundle build_crp_dual(const ProblemData& data, const HierarchyConfig& cfg);

struct RelaxationResult {
  SolveStatus status = SolveStatus::Inconclusive;
  /// Relaxation value in the polynomial problem's sense. -inf when the
  /// certificate side is infeasible, +inf when the moment side is.
  double value = 0.0;
  SolveReport report;
};

RelaxationResult solve_relaxation(const RelaxationBundle& bundle, const SolveSettings& settings = {});

struct Certificate {
  double mu = 0.0;
  std::vector<double> c;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd psd_gram;
  SdsosWitness sdsos;
  /// Max coefficient error of f - sum c h - <lambda, G> - mu - sigma.
  double identity_error = 0.0;
};

/// Reads a certificate from a primal-side solution.
Certificate decode_certificate(const RelaxationBundle& bundle, const ProblemData& data,
                               const Eigen::VectorXd& z);

/// Reads y from a dual-side solution.
MomentVector decode_moments(const RelaxationBundle& bundle, const Eigen::VectorXd& z);

/// Completes y to a full conic point of a dual-side bundle (slacks set from
/// the constraints) and returns the largest equality or cone violation.
double moment_violation(const RelaxationBundle& bundle, const MomentVector& y);

/// Cone blocks of the conic program, for structural comparisons.
std::vector<ConeBlock> cone_inventory(const RelaxationBundle& bundle);

/// FNV-1a hash of the problem data and configuration.
std::uint64_t fingerprint(const ProblemData& data, const HierarchyConfig& cfg, RelaxationKind kind);

}  // namespace bdcone
