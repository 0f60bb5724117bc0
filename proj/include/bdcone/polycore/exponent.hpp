#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace bdcone {

/// Multi-index of a monomial x_1^{p_1} ... x_n^{p_n}. The length is the
/// ambient variable count; every entry is nonnegative.
class Exponent {
 public:
  Exponent() = default;
  explicit Exponent(std::size_t nvars) : powers_(nvars, 0) {}
  Exponent(std::initializer_list<int> powers);
  explicit Exponent(std::vector<int> powers);

  /// x_i^power in `nvars` variables.
  static Exponent unit(std::size_t nvars, std::size_t i, int power = 1);

  std::size_t size() const { return powers_.size(); }
  int operator[](std::size_t i) const { return powers_[i]; }
  const std::vector<int>& powers() const { return powers_; }
  int degree() const;
  int max_power() const;
  bool is_zero() const { return degree() == 0; }

  /// Indices i with p_i != 0.
  std::vector<std::size_t> support() const;

  Exponent operator+(const Exponent& other) const;
  Exponent& operator+=(const Exponent& other);

  /// Concatenation (p, q), used for padding into a larger variable block.
  Exponent concat(const Exponent& tail) const;

  bool operator==(const Exponent& other) const = default;

  std::string to_string() const;

 private:
  std::vector<int> powers_;
};

/// Graded lexicographic comparison with x_1 > x_2 > ... : lower total degree
/// first, then larger leading powers first. This reproduces the canonical
/// listing 1, x_1, ..., x_n, x_1^2, x_1 x_2, ..., x_n^2, ...
std::strong_ordering graded_lex_compare(const Exponent& a, const Exponent& b);

struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    return graded_lex_compare(a, b) < 0;
  }
};

struct ExponentHash {
  std::size_t operator()(const Exponent& e) const noexcept;
};

}  // namespace bdcone
