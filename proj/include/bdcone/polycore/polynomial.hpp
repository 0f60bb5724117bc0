#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bdcone/polycore/exponent.hpp"

namespace bdcone {

/// Sparse real polynomial in a fixed number of variables. Terms are kept in
/// graded-lex order and no stored coefficient is exactly zero.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, double, GradedLexLess>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, double value);
  static Polynomial variable(std::size_t nvars, std::size_t i);
  static Polynomial monomial(const Exponent& e, double coeff = 1.0);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Maximum stored total degree; 0 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  double coefficient(const Exponent& e) const;
  double constant_term() const;

  /// Adds `coeff * x^e`, dropping the term if the sum is exactly zero.
  void add_term(const Exponent& e, double coeff);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;

  bool operator==(const Polynomial& other) const = default;

  /// Human readable form, e.g. "x1^4 - x2". Names default to x1..xn.
  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  void check_same(const Polynomial& other) const;

  std::size_t nvars_ = 0;
  TermMap terms_;
};

Polynomial add(const Polynomial& f, const Polynomial& g);
Polynomial mul(const Polynomial& f, const Polynomial& g);
Polynomial scale(const Polynomial& f, double lambda);
Polynomial power(const Polynomial& f, int k);

double evaluate(const Polynomial& f, std::span<const double> x);

/// Exact partial derivatives, one per variable.
std::vector<Polynomial> gradient(const Polynomial& f);

/// g_i / M coefficientwise. Throws for M <= 0.
std::vector<Polynomial> scale_constraints(std::span<const Polynomial> g, double M);

/// f~(x, t) = sum f_p x^p t^(d - |p|) with d = degree(f); t is appended as
/// the last variable.
Polynomial homogenize(const Polynomial& f);

/// Drops terms with |coeff| <= abs_tol.
Polynomial prune(const Polynomial& f, double abs_tol);

/// Embeds f into a larger variable space: variable i of f becomes variable
/// offset + i of the result.
Polynomial lift(const Polynomial& f, std::size_t nvars, std::size_t offset);

/// Default variable name x1..xn.
std::string default_variable_name(std::size_t i);

}  // namespace bdcone
