#include "bdcone/certcones/gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace bdcone {

std::vector<ConeBlock> GramLayout::blocks() const {
  std::vector<ConeBlock> out;
  if (has_psd()) out.push_back({ConeKind::PSD, psd_basis.size()});
  if (has_sdsos()) {
    out.push_back({ConeKind::NonNeg, sdsos_basis.size()});
    for (std::size_t k = 0; k < pairs.size(); ++k) out.push_back({ConeKind::SecondOrder, 3});
  }
  return out;
}

std::size_t GramLayout::num_columns() const {
  std::size_t n = 0;
  for (const auto& b : blocks()) n += b.size();
  return n;
}

GramLayout add_gram_blocks(ConicBuilder& builder, const MonomialBasis& rows,
                           std::size_t row_offset, std::vector<Exponent> psd_basis,
                           std::vector<Exponent> sdsos_basis) {
  GramLayout g;
  g.psd_basis = std::move(psd_basis);
  g.sdsos_basis = std::move(sdsos_basis);
  auto row = [&](const Exponent& e) { return row_offset + rows.index_of(e); };

  if (g.has_psd()) {
    const std::size_t side = g.psd_basis.size();
    g.psd_offset = builder.add_block({ConeKind::PSD, side});
    for (std::size_t j = 0; j < side; ++j) {
      for (std::size_t i = j; i < side; ++i) {
        // Q_ij + Q_ji = sqrt(2) * vec entry off the diagonal.
        const double w = i == j ? 1.0 : std::numbers::sqrt2;
        builder.add_coeff(row(g.psd_basis[i] + g.psd_basis[j]),
                          g.psd_offset + psd_vec_index(i, j, side), w);
      }
    }
  }
  if (g.has_sdsos()) {
    const std::size_t s = g.sdsos_basis.size();
    g.diag_offset = builder.add_block({ConeKind::NonNeg, s});
    for (std::size_t i = 0; i < s; ++i) {
      builder.add_coeff(row(g.sdsos_basis[i] + g.sdsos_basis[i]), g.diag_offset + i, 1.0);
    }
    for (std::size_t j = 1; j < s; ++j) {
      for (std::size_t i = 0; i < j; ++i) g.pairs.emplace_back(i, j);
    }
    for (std::size_t k = 0; k < g.pairs.size(); ++k) {
      const auto [i, j] = g.pairs[k];
      const std::size_t col = builder.add_block({ConeKind::SecondOrder, 3});
      if (k == 0) g.soc_offset = col;
      const std::size_t ri = row(g.sdsos_basis[i] + g.sdsos_basis[i]);
      const std::size_t rj = row(g.sdsos_basis[j] + g.sdsos_basis[j]);
      builder.add_coeff(ri, col, 0.5);
      builder.add_coeff(ri, col + 1, 0.5);
      builder.add_coeff(rj, col, 0.5);
      builder.add_coeff(rj, col + 1, -0.5);
      builder.add_coeff(row(g.sdsos_basis[i] + g.sdsos_basis[j]), col + 2, 1.0);
    }
  }
  return g;
}

std::pair<std::vector<Exponent>, std::vector<Exponent>> split_bases(std::size_t n1,
                                                                    std::size_t n2,
                                                                    int half_degree) {
  std::vector<Exponent> first, second;
  if (n1 > 0) first = embed(MonomialBasis(n1, half_degree), BlockPosition::kFirst, n1, n2);
  if (n2 > 0) second = embed(MonomialBasis(n2, half_degree), BlockPosition::kSecond, n1, n2);
  return {std::move(first), std::move(second)};
}

void newton_prune(const Polynomial& f, std::vector<Exponent>& psd_basis,
                  std::vector<Exponent>& sdsos_basis) {
  if (f.is_zero()) {
    psd_basis.clear();
    sdsos_basis.clear();
    return;
  }
  const std::size_t n = f.nvars();
  std::vector<int> lo(n, std::numeric_limits<int>::max()), hi(n, 0);
  int dmin = std::numeric_limits<int>::max(), dmax = 0;
  for (const auto& [e, c] : f.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], e[i]);
      hi[i] = std::max(hi[i], e[i]);
    }
    dmin = std::min(dmin, e.degree());
    dmax = std::max(dmax, e.degree());
  }
  auto in_box = [&](const Exponent& b) {
    for (std::size_t i = 0; i < n; ++i) {
      if (2 * b[i] < lo[i] || 2 * b[i] > hi[i]) return false;
    }
    return 2 * b.degree() >= dmin && 2 * b.degree() <= dmax;
  };
  std::erase_if(psd_basis, [&](const Exponent& b) { return !in_box(b); });
  std::erase_if(sdsos_basis, [&](const Exponent& b) { return !in_box(b); });

  auto has_cross = [](const std::vector<Exponent>& basis, const Exponent& target,
                      const std::unordered_set<Exponent, ExponentHash>& set) {
    for (const auto& b : basis) {
      bool ok = true;
      std::vector<int> rest(target.size());
      for (std::size_t i = 0; i < target.size() && ok; ++i) {
        rest[i] = target[i] - b[i];
        ok = rest[i] >= 0;
      }
      if (!ok) continue;
      Exponent other(std::move(rest));
      if (!(other == b) && set.count(other)) return true;
    }
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    const std::unordered_set<Exponent, ExponentHash> pset(psd_basis.begin(), psd_basis.end());
    const std::unordered_set<Exponent, ExponentHash> sset(sdsos_basis.begin(), sdsos_basis.end());
    std::unordered_set<Exponent, ExponentHash> drop;
    auto consider = [&](const Exponent& b) {
      const Exponent sq = b + b;
      if (f.coefficient(sq) != 0.0) return;
      if (has_cross(psd_basis, sq, pset) || has_cross(sdsos_basis, sq, sset)) return;
      drop.insert(b);
    };
    for (const auto& b : psd_basis) consider(b);
    for (const auto& b : sdsos_basis) consider(b);
    if (!drop.empty()) {
      changed = true;
      std::erase_if(psd_basis, [&](const Exponent& b) { return drop.count(b) > 0; });
      std::erase_if(sdsos_basis, [&](const Exponent& b) { return drop.count(b) > 0; });
    }
  }
}

Eigen::MatrixXd psd_gram(const GramLayout& g, std::span<const double> z) {
  const std::size_t side = g.psd_basis.size();
  if (side == 0) return Eigen::MatrixXd(0, 0);
  return psd_unvec(z.subspan(g.psd_offset, psd_vec_size(side)), side);
}

std::size_t SdsosWitness::nvars() const { return basis.empty() ? 0 : basis.front().size(); }

Polynomial SdsosWitness::expand(std::size_t n) const {
  Polynomial out(n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out.add_term(basis[i] + basis[i], alpha[i]);
  }
  for (const auto& sq : squares) {
    out.add_term(basis[sq.i] + basis[sq.i], sq.beta * sq.beta);
    out.add_term(basis[sq.j] + basis[sq.j], sq.gamma * sq.gamma);
    out.add_term(basis[sq.i] + basis[sq.j], 2.0 * sq.beta * sq.gamma);
  }
  return out;
}

SdsosWitness sdsos_witness(const GramLayout& g, std::span<const double> z) {
  SdsosWitness w;
  w.basis = g.sdsos_basis;
  w.alpha.assign(w.basis.size(), 0.0);
  for (std::size_t i = 0; i < w.basis.size(); ++i) w.alpha[i] = std::max(z[g.diag_offset + i], 0.0);
  for (std::size_t k = 0; k < g.pairs.size(); ++k) {
    const auto [i, j] = g.pairs[k];
    const double t = z[g.soc_offset + 3 * k];
    const double u = z[g.soc_offset + 3 * k + 1];
    const double v = z[g.soc_offset + 3 * k + 2];
    const double a = 0.5 * (t + u);
    const double b = 0.5 * (t - u);
    const double c = 0.5 * v;
    // [[a, c], [c, b]] = (sqrt(a) m_i + c / sqrt(a) m_j)^2 + (b - c^2 / a) m_j^2,
    // pivoting on the larger diagonal entry.
    if (a >= b && a > 0.0) {
      const double ra = std::sqrt(a);
      w.squares.push_back({i, j, ra, c / ra});
      w.alpha[j] += std::max(b - c * c / a, 0.0);
    } else if (b > 0.0) {
      const double rb = std::sqrt(b);
      w.squares.push_back({i, j, c / rb, rb});
      w.alpha[i] += std::max(a - c * c / b, 0.0);
    }
  }
  return w;
}

Polynomial gram_polynomial(const GramLayout& g, std::span<const double> z, std::size_t nvars) {
  Polynomial out(nvars);
  const std::size_t side = g.psd_basis.size();
  for (std::size_t j = 0; j < side; ++j) {
    for (std::size_t i = j; i < side; ++i) {
      const double w = i == j ? 1.0 : std::numbers::sqrt2;
      out.add_term(g.psd_basis[i] + g.psd_basis[j], w * z[g.psd_offset + psd_vec_index(i, j, side)]);
    }
  }
  for (std::size_t i = 0; i < g.sdsos_basis.size(); ++i) {
    out.add_term(g.sdsos_basis[i] + g.sdsos_basis[i], z[g.diag_offset + i]);
  }
  for (std::size_t k = 0; k < g.pairs.size(); ++k) {
    const auto [i, j] = g.pairs[k];
    const double t = z[g.soc_offset + 3 * k];
    const double u = z[g.soc_offset + 3 * k + 1];
    const double v = z[g.soc_offset + 3 * k + 2];
    out.add_term(g.sdsos_basis[i] + g.sdsos_basis[i], 0.5 * (t + u));
    out.add_term(g.sdsos_basis[j] + g.sdsos_basis[j], 0.5 * (t - u));
    out.add_term(g.sdsos_basis[i] + g.sdsos_basis[j], v);
  }
  return out;
}

}  // namespace bdcone
