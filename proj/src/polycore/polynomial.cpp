#include "bdcone/polycore/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bdcone {

Polynomial Polynomial::constant(std::size_t nvars, double value) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars), value);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  p.add_term(Exponent::unit(nvars, i), 1.0);
  return p;
}

Polynomial Polynomial::monomial(const Exponent& e, double coeff) {
  Polynomial p(e.size());
  p.add_term(e, coeff);
  return p;
}

int Polynomial::degree() const {
  // Terms are graded, so the last one has maximal degree.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = terms_.begin()->first.degree();
  return d == terms_.rbegin()->first.degree();
}

double Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const { return coefficient(Exponent(nvars_)); }

void Polynomial::add_term(const Exponent& e, double coeff) {
  if (e.size() != nvars_) {
    throw std::invalid_argument("Polynomial: exponent length " +
                                std::to_string(e.size()) + " != nvars " +
                                std::to_string(nvars_));
  }
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Polynomial::check_same(const Polynomial& other) const {
  if (other.nvars_ != nvars_) {
    throw std::invalid_argument("Polynomial: nvars mismatch (" +
                                std::to_string(nvars_) + " vs " +
                                std::to_string(other.nvars_) + ")");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (it->second == 0.0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  Polynomial out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  }
  return out;
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

std::string default_variable_name(std::size_t i) { return "x" + std::to_string(i + 1); }

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  auto name = [&](std::size_t i) {
    return i < names.size() ? names[i] : default_variable_name(i);
  };
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    double mag = c;
    if (first) {
      if (c < 0) {
        os << "-";
        mag = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      mag = std::abs(c);
    }
    first = false;
    const bool is_const = e.is_zero();
    if (is_const || mag != 1.0) {
      os << mag;
      if (!is_const) os << "*";
    }
    bool first_factor = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first_factor) os << "*";
      first_factor = false;
      os << name(i);
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

Polynomial add(const Polynomial& f, const Polynomial& g) { return f + g; }
Polynomial mul(const Polynomial& f, const Polynomial& g) { return f * g; }
Polynomial scale(const Polynomial& f, double lambda) { return f * lambda; }

Polynomial power(const Polynomial& f, int k) {
  if (k < 0) throw std::invalid_argument("power: negative exponent");
  Polynomial result = Polynomial::constant(f.nvars(), 1.0);
  Polynomial base = f;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

double evaluate(const Polynomial& f, std::span<const double> x) {
  if (x.size() != f.nvars()) {
    throw std::invalid_argument("evaluate: point has dimension " +
                                std::to_string(x.size()) + ", polynomial has " +
                                std::to_string(f.nvars()) + " variables");
  }
  // Term values are summed by increasing magnitude, so the result does not
  // depend on the term order (homogenize reorders terms but keeps values).
  std::vector<double> vals;
  vals.reserve(f.num_terms());
  for (const auto& [e, c] : f.terms()) {
    double m = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int p = 0; p < e[i]; ++p) m *= x[i];
    }
    vals.push_back(m);
  }
  std::sort(vals.begin(), vals.end(), [](double a, double b) {
    const double aa = std::abs(a), ab = std::abs(b);
    return aa != ab ? aa < ab : a < b;
  });
  double sum = 0.0;
  for (double v : vals) sum += v;
  return sum;
}

std::vector<Polynomial> gradient(const Polynomial& f) {
  std::vector<Polynomial> grad(f.nvars(), Polynomial(f.nvars()));
  for (const auto& [e, c] : f.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      std::vector<int> d = e.powers();
      d[i] -= 1;
      grad[i].add_term(Exponent(std::move(d)), c * e[i]);
    }
  }
  return grad;
}

std::vector<Polynomial> scale_constraints(std::span<const Polynomial> g, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("scale_constraints: M must be positive");
  std::vector<Polynomial> out;
  out.reserve(g.size());
  for (const auto& gi : g) out.push_back(gi * (1.0 / M));
  return out;
}

Polynomial homogenize(const Polynomial& f) {
  const int d = f.degree();
  Polynomial out(f.nvars() + 1);
  for (const auto& [e, c] : f.terms()) {
    std::vector<int> p = e.powers();
    p.push_back(d - e.degree());
    out.add_term(Exponent(std::move(p)), c);
  }
  return out;
}

Polynomial prune(const Polynomial& f, double abs_tol) {
  Polynomial out(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (std::abs(c) > abs_tol) out.add_term(e, c);
  }
  return out;
}

Polynomial lift(const Polynomial& f, std::size_t nvars, std::size_t offset) {
  if (offset + f.nvars() > nvars) throw std::invalid_argument("lift: does not fit");
  Polynomial out(nvars);
  for (const auto& [e, c] : f.terms()) {
    std::vector<int> p(nvars, 0);
    for (std::size_t i = 0; i < e.size(); ++i) p[offset + i] = e[i];
    out.add_term(Exponent(std::move(p)), c);
  }
  return out;
}

}  // namespace bdcone
