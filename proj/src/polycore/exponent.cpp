#include "bdcone/polycore/exponent.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bdcone {

Exponent::Exponent(std::initializer_list<int> powers)
    : Exponent(std::vector<int>(powers)) {}

Exponent::Exponent(std::vector<int> powers) : powers_(std::move(powers)) {
  for (int p : powers_) {
    if (p < 0) throw std::invalid_argument("Exponent: negative power");
  }
}

Exponent Exponent::unit(std::size_t nvars, std::size_t i, int power) {
  if (i >= nvars) throw std::out_of_range("Exponent::unit: variable index");
  if (power < 0) throw std::invalid_argument("Exponent::unit: negative power");
  Exponent e(nvars);
  e.powers_[i] = power;
  return e;
}

int Exponent::degree() const {
  return std::accumulate(powers_.begin(), powers_.end(), 0);
}

int Exponent::max_power() const {
  return powers_.empty() ? 0 : *std::max_element(powers_.begin(), powers_.end());
}

std::vector<std::size_t> Exponent::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < powers_.size(); ++i) {
    if (powers_[i] != 0) out.push_back(i);
  }
  return out;
}

Exponent Exponent::operator+(const Exponent& other) const {
  Exponent out = *this;
  out += other;
  return out;
}

Exponent& Exponent::operator+=(const Exponent& other) {
  if (other.size() != size()) {
    throw std::invalid_argument("Exponent: variable count mismatch");
  }
  for (std::size_t i = 0; i < powers_.size(); ++i) powers_[i] += other.powers_[i];
  return *this;
}

Exponent Exponent::concat(const Exponent& tail) const {
  std::vector<int> out = powers_;
  out.insert(out.end(), tail.powers_.begin(), tail.powers_.end());
  return Exponent(std::move(out));
}

std::string Exponent::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < powers_.size(); ++i) {
    if (i) os << ',';
    os << powers_[i];
  }
  os << ')';
  return os.str();
}

std::strong_ordering graded_lex_compare(const Exponent& a, const Exponent& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da <=> db;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    // Larger power of an earlier variable sorts first.
    if (a[i] != b[i]) return b[i] <=> a[i];
  }
  return a.size() <=> b.size();
}

std::size_t ExponentHash::operator()(const Exponent& e) const noexcept {
  // FNV-1a over the powers.
  std::uint64_t h = 1469598103934665603ULL;
  for (int p : e.powers()) {
    h ^= static_cast<std::uint64_t>(p) + 0x9e37;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace bdcone
