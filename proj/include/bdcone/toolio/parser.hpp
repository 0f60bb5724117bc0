#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bdcone/hierarchy/problem_data.hpp"

namespace bdcone {

/// Parse failure with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

enum class Relation { GreaterEq, LessEq, Equal };

struct SourceConstraint {
  Polynomial lhs;
  Relation rel = Relation::GreaterEq;
  Polynomial rhs;
  bool operator==(const SourceConstraint&) const = default;
};

struct SourceBox {
  std::size_t var = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const SourceBox&) const = default;
};

struct SourceOptions {
  std::optional<double> M;
  std::optional<int> k;
  std::optional<int> r;
  std::optional<std::pair<std::size_t, std::size_t>> split;
  bool operator==(const SourceOptions&) const = default;
};

/// A problem as written:
///   vars x1 x2
///   minimize: x1^4 - x2
///   st: 1 - x1^4 - x2^4 >= 0
///   box x1 0 1
///   option k 2
/// Options are M, k, r and split (as "n1,n2"). '#' starts a comment.
struct ProblemSource {
  std::vector<std::string> vars;
  bool maximize = false;
  Polynomial objective;
  std::vector<SourceConstraint> constraints;
  std::vector<SourceBox> boxes;
  SourceOptions options;
  bool operator==(const ProblemSource&) const = default;
};

ProblemSource parse_problem(std::string_view text);

/// Parses a polynomial expression over the given variable names.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars);

/// Identifiers of an expression in natural order (x2 before x10).
std::vector<std::string> expression_variables(std::string_view text);

/// Canonical text; parse_problem(print_problem(s)) == s.
std::string print_problem(const ProblemSource& source);

/// Polynomial in the expression syntax, coefficients with 17 significant
/// digits.
std::string format_polynomial(const Polynomial& f, const std::vector<std::string>& vars);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// minimize f subject to g_i >= 0: maximize negates the objective, "lhs >= rhs"
/// gives lhs - rhs, "<=" gives rhs - lhs, "==" gives both. Box lines append
/// x - lo and hi - x in source order and set the box when every variable has
/// one. Option M is copied.
ProblemData to_problem_data(const ProblemSource& source);

/// k, r and split from the options, with defaults k = 1, r = 2 (or the even
/// ceiling of the objective degree) and split (0, n).
HierarchyConfig config_from_options(const ProblemSource& source);

}  // namespace bdcone
