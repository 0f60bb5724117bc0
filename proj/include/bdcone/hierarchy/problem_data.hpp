#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bdcone/polycore/polynomial.hpp"

namespace bdcone {

/// lo_i <= x_i <= hi_i for every variable.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

enum class ConeSet { Orthant, PSD };

/// G(x) in S. Orthant: `entries` is the vector (G_1, ..., G_p). PSD: `entries`
/// is the symmetric side x side matrix stored row-major.
struct ConeConstraint {
  ConeSet set = ConeSet::Orthant;
  std::size_t side = 0;
  std::vector<Polynomial> entries;

  const Polynomial& at(std::size_t i, std::size_t j) const { return entries[i * side + j]; }
};

/// inf f(x) subject to g_i(x) >= 0 (and optionally G(x) in S).
struct ProblemData {
  Polynomial f;
  std::vector<Polynomial> g;
  /// Scaling constant for g_i / M; 0 selects the interval rule over `box`.
  double M = 0.0;
  /// Bounds on the variables. The box rows must also appear in `g`.
  std::optional<Box> box;
  std::optional<ConeConstraint> cone;
  std::vector<std::string> names;

  std::size_t nvars() const { return f.nvars(); }
  int max_constraint_degree() const;
  /// Throws std::invalid_argument on mismatched variable counts.
  void validate() const;
};

/// Upper bound of f over the box by interval arithmetic on each term.
double interval_upper_bound(const Polynomial& f, const Box& box);

struct ScalingInfo {
  double M = 0.0;
  /// "user", "interval" or "unconstrained".
  std::string source;
  /// Assumption A holds through the box constraints.
  bool assumption_a = false;
  std::vector<std::string> warnings;
};

/// Chooses M: the user value when positive, else 1 + max_i of the interval
/// upper bound of g_i over the box. Without constraints M is irrelevant and
/// defaults to 1. Throws when neither is available.
ScalingInfo resolve_scaling(const ProblemData& data);

/// Samples `samples` random points of the box and warns when some feasible
/// point has g_i(x) >= M.
std::vector<std::string> check_scaling(const ProblemData& data, double M, std::size_t samples,
                                       unsigned seed);

/// Appends the box rows x_i - lo_i >= 0 and hi_i - x_i >= 0 to g and sets box.
void add_box(ProblemData& data, const Box& box);

struct HierarchyConfig {
  int k = 1;
  int r = 2;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  /// Throws std::invalid_argument when the config does not fit `nvars`.
  void validate(std::size_t nvars) const;
};

/// max{degree f, k * max_i degree g_i, r}.
int matching_degree(const ProblemData& data, const HierarchyConfig& cfg);

}  // namespace bdcone
