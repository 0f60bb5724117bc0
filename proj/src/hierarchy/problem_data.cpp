#include "bdcone/hierarchy/problem_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bdcone {

int ProblemData::max_constraint_degree() const {
  int d = 0;
  for (const auto& gi : g) d = std::max(d, gi.degree());
  return d;
}

void ProblemData::validate() const {
  const std::size_t n = nvars();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].nvars() != n) {
      throw std::invalid_argument("ProblemData: g" + std::to_string(i + 1) +
                                  " has a different variable count");
    }
  }
  if (box && (box->lo.size() != n || box->hi.size() != n)) {
    throw std::invalid_argument("ProblemData: box dimension mismatch");
  }
  if (cone) {
    const std::size_t want = cone->set == ConeSet::PSD ? cone->side * cone->side : cone->entries.size();
    if (cone->entries.size() != want || cone->entries.empty()) {
      throw std::invalid_argument("ProblemData: malformed cone constraint");
    }
    for (const auto& e : cone->entries) {
      if (e.nvars() != n) throw std::invalid_argument("ProblemData: cone entry variable count");
    }
    if (cone->set == ConeSet::PSD) {
      for (std::size_t i = 0; i < cone->side; ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (!(cone->at(i, j) == cone->at(j, i))) {
            throw std::invalid_argument("ProblemData: PSD cone constraint is not symmetric");
          }
    }
  }
  if (M < 0.0 || !std::isfinite(M)) throw std::invalid_argument("ProblemData: M must be positive");
}

namespace {

struct Interval {
  double lo;
  double hi;
};

Interval ipow(Interval x, int p) {
  if (p == 0) return {1.0, 1.0};
  const double a = std::pow(x.lo, p), b = std::pow(x.hi, p);
  if (p % 2 == 1) return {a, b};
  if (x.lo <= 0.0 && x.hi >= 0.0) return {0.0, std::max(a, b)};
  return {std::min(a, b), std::max(a, b)};
}

Interval imul(Interval x, Interval y) {
  const double c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

}  // namespace

double interval_upper_bound(const Polynomial& f, const Box& box) {
  double ub = 0.0;
  for (const auto& [e, c] : f.terms()) {
    Interval t{1.0, 1.0};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) t = imul(t, ipow({box.lo[i], box.hi[i]}, e[i]));
    }
    ub += c >= 0 ? c * t.hi : c * t.lo;
  }
  return ub;
}

ScalingInfo resolve_scaling(const ProblemData& data) {
  ScalingInfo info;
  info.assumption_a = data.box.has_value();
  if (data.g.empty()) {
    info.M = data.M > 0.0 ? data.M : 1.0;
    info.source = data.M > 0.0 ? "user" : "unconstrained";
    return info;
  }
  if (data.M > 0.0) {
    info.M = data.M;
    info.source = "user";
    if (data.box) {
      for (const auto& gi : data.g) {
        if (interval_upper_bound(gi, *data.box) >= data.M) {
          info.warnings.push_back("M = " + std::to_string(data.M) +
                                  " may not exceed sup g_i over K (interval bound is larger)");
          break;
        }
      }
    } else {
      info.warnings.push_back("M supplied without a box; exactness depends on M > sup_K g_i");
    }
  } else {
    if (!data.box) {
      throw std::invalid_argument("resolve_scaling: no M given and no box to bound g_i");
    }
    double ub = 0.0;
    for (const auto& gi : data.g) ub = std::max(ub, interval_upper_bound(gi, *data.box));
    info.M = 1.0 + ub;
    info.source = "interval";
  }
  if (!info.assumption_a) info.warnings.push_back("Assumption A not verified (no box constraints)");
  return info;
}

std::vector<std::string> check_scaling(const ProblemData& data, double M, std::size_t samples,
                                       unsigned seed) {
  std::vector<std::string> out;
  if (!data.box) return out;
  std::mt19937_64 rng(seed);
  std::vector<double> x(data.nvars());
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::uniform_real_distribution<double>(data.box->lo[i], data.box->hi[i])(rng);
    }
    bool feasible = true;
    double worst = -INFINITY;
    for (const auto& gi : data.g) {
      const double v = evaluate(gi, x);
      feasible = feasible && v >= 0.0;
      worst = std::max(worst, v);
    }
    if (feasible && worst >= M) {
      std::ostringstream os;
      os << "sampled feasible point with max g_i = " << worst << " >= M = " << M;
      out.push_back(os.str());
      break;
    }
  }
  return out;
}

void add_box(ProblemData& data, const Box& box) {
  const std::size_t n = data.nvars();
  for (std::size_t i = 0; i < n; ++i) {
    data.g.push_back(Polynomial::variable(n, i) - Polynomial::constant(n, box.lo[i]));
    data.g.push_back(Polynomial::constant(n, box.hi[i]) - Polynomial::variable(n, i));
  }
  data.box = box;
}

void HierarchyConfig::validate(std::size_t nvars) const {
  if (k < 0) throw std::invalid_argument("HierarchyConfig: k must be >= 0");
  if (r < 0 || r % 2 != 0) throw std::invalid_argument("HierarchyConfig: r must be even");
  if (n1 + n2 != nvars) {
    throw std::invalid_argument("HierarchyConfig: split (" + std::to_string(n1) + ", " +
                                std::to_string(n2) + ") does not cover " +
                                std::to_string(nvars) + " variables");
  }
}

int matching_degree(const ProblemData& data, const HierarchyConfig& cfg) {
  return std::max({data.f.degree(), cfg.k * data.max_constraint_degree(), cfg.r});
}

}  // namespace bdcone
