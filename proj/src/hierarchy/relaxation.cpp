#include "bdcone/hierarchy/relaxation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bdcone/conic/cones.hpp"

namespace bdcone {

namespace {

constexpr double kBuilderPrune = 1e-14;

struct Plan {
  RelaxationKind kind = RelaxationKind::Primal;
  HierarchyConfig cfg;
  int degree = 0;
  double M = 1.0;
  std::vector<Polynomial> multipliers;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> products;
  std::optional<ConeConstraint> cone;
};

int plan_degree(const ProblemData& data, const Plan& plan, int base) {
  int d = std::max({base, data.f.degree(), plan.cfg.r});
  for (const auto& h : plan.multipliers) d = std::max(d, h.degree());
  if (plan.cone) {
    for (const auto& e : plan.cone->entries) d = std::max(d, e.degree());
  }
  return d;
}

void add_entry(Decoder& dec, std::string name, std::size_t offset, std::size_t size) {
  dec.entries.push_back({std::move(name), offset, size});
}

std::size_t add_block_if(ConicBuilder& b, ConeBlock block) {
  return block.dim == 0 ? b.num_vars() : b.add_block(block);
}


ConeBlock cone_block(const ConeConstraint& cone) {
  return cone.set == ConeSet::PSD ? ConeBlock{ConeKind::PSD, cone.side}
                                  : ConeBlock{ConeKind::NonNeg, cone.entries.size()};
}

/// (entry polynomial, weight) per column of the cone multiplier block.
std::vector<std::pair<const Polynomial*, double>> cone_terms(const ConeConstraint& cone) {
  std::vector<std::pair<const Polynomial*, double>> out;
  if (cone.set == ConeSet::Orthant) {
    for (const auto& e : cone.entries) out.emplace_back(&e, 1.0);
    return out;
  }
  out.resize(psd_vec_size(cone.side));
  for (std::size_t j = 0; j < cone.side; ++j) {
    for (std::size_t i = j; i < cone.side; ++i) {
      out[psd_vec_index(i, j, cone.side)] = {&cone.at(i, j), i == j ? 1.0 : std::numbers::sqrt2};
    }
  }
  return out;
}

RelaxationMeta make_meta(const ProblemData& data, const Plan& plan) {
  RelaxationMeta meta;
  meta.kind = plan.kind;
  meta.sense = is_dual(plan.kind) ? 1 : -1;
  meta.config = plan.cfg;
  meta.degree = plan.degree;
  meta.M = plan.M;
  meta.fingerprint = fingerprint(data, plan.cfg, plan.kind);
  return meta;
}

RelaxationBundle assemble_primal(const ProblemData& data, Plan plan) {
  const std::size_t n = data.nvars();
  RelaxationBundle out;
  out.rows = MonomialBasis(n, plan.degree);
  ConicBuilder b;
  b.add_rows(out.rows.size());
  for (const auto& [e, c] : data.f.terms()) b.set_rhs(out.rows.index_of(e), c);

  const std::size_t mu = b.add_block({ConeKind::Free, 1});
  b.set_objective(mu, -1.0);
  b.add_coeff(0, mu, 1.0);
  add_entry(out.decoder, "mu", mu, 1);

  const std::size_t c0 = add_block_if(b, {ConeKind::NonNeg, plan.multipliers.size()});
  for (std::size_t j = 0; j < plan.multipliers.size(); ++j) {
    const Polynomial pruned = prune(plan.multipliers[j], kBuilderPrune);
    for (const auto& [e, v] : pruned.terms()) {
      b.add_coeff(out.rows.index_of(e), c0 + j, v);
    }
  }
  add_entry(out.decoder, "c", c0, plan.multipliers.size());

  if (plan.cone) {
    const std::size_t l0 = b.add_block(cone_block(*plan.cone));
    const auto terms = cone_terms(*plan.cone);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const Polynomial pruned = prune(*terms[j].first, kBuilderPrune);
      for (const auto& [e, v] : pruned.terms()) {
        b.add_coeff(out.rows.index_of(e), l0 + j, terms[j].second * v);
      }
    }
    add_entry(out.decoder, "lambda", l0, terms.size());
  }

  auto [psd, sdsos] = split_bases(plan.cfg.n1, plan.cfg.n2, plan.cfg.r / 2);
  const std::size_t g0 = b.num_vars();
  out.gram = add_gram_blocks(b, out.rows, 0, std::move(psd), std::move(sdsos));
  const std::size_t psd_cols = out.gram.has_psd() ? psd_vec_size(out.gram.psd_basis.size()) : 0;
  add_entry(out.decoder, "gram.psd", g0, psd_cols);
  add_entry(out.decoder, "gram.diag", g0 + psd_cols, out.gram.sdsos_basis.size());
  add_entry(out.decoder, "gram.soc", g0 + psd_cols + out.gram.sdsos_basis.size(),
            3 * out.gram.pairs.size());

  out.conic = b.build();
  out.meta = make_meta(data, plan);
  out.multipliers = std::move(plan.multipliers);
  out.products = std::move(plan.products);
  out.cone = std::move(plan.cone);
  return out;
}

RelaxationBundle assemble_dual(const ProblemData& data, Plan plan) {
  const std::size_t n = data.nvars();
  RelaxationBundle out;
  out.rows = MonomialBasis(n, plan.degree);
  const auto& rows = out.rows;
  ConicBuilder b;

  const std::size_t y0 = b.add_block({ConeKind::Free, rows.size()});
  for (const auto& [e, c] : data.f.terms()) b.set_objective(y0 + rows.index_of(e), c);
  add_entry(out.decoder, "y", y0, rows.size());
  b.add_coeff(b.add_row(1.0), y0, 1.0);
  auto ycol = [&](const Exponent& e) { return y0 + rows.index_of(e); };

  const std::size_t w0 = add_block_if(b, {ConeKind::NonNeg, plan.multipliers.size()});
  for (std::size_t j = 0; j < plan.multipliers.size(); ++j) {
    const std::size_t row = b.add_row(0.0);
    const Polynomial pruned = prune(plan.multipliers[j], kBuilderPrune);
    for (const auto& [e, v] : pruned.terms()) {
      b.add_coeff(row, ycol(e), v);
    }
    b.add_coeff(row, w0 + j, -1.0);
  }
  add_entry(out.decoder, "w", w0, plan.multipliers.size());

  if (plan.cone) {
    const std::size_t l0 = b.add_block(cone_block(*plan.cone));
    const auto terms = cone_terms(*plan.cone);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const std::size_t row = b.add_row(0.0);
      const Polynomial pruned = prune(*terms[j].first, kBuilderPrune);
      for (const auto& [e, v] : pruned.terms()) {
        b.add_coeff(row, ycol(e), v);
      }
      b.add_coeff(row, l0 + j, -1.0 / terms[j].second);
    }
    add_entry(out.decoder, "lambda", l0, terms.size());
  }

  auto [psd, sdsos] = split_bases(plan.cfg.n1, plan.cfg.n2, plan.cfg.r / 2);
  out.gram.psd_basis = std::move(psd);
  out.gram.sdsos_basis = std::move(sdsos);
  auto& g = out.gram;

  std::size_t psd_cols = 0;
  g.psd_offset = b.num_vars();
  if (g.has_psd()) {
    const std::size_t side = g.psd_basis.size();
    psd_cols = psd_vec_size(side);
    g.psd_offset = b.add_block({ConeKind::PSD, side});
    for (std::size_t j = 0; j < side; ++j) {
      for (std::size_t i = j; i < side; ++i) {
        const std::size_t row = b.add_row(0.0);
        b.add_coeff(row, ycol(g.psd_basis[i] + g.psd_basis[j]), 1.0);
        b.add_coeff(row, g.psd_offset + psd_vec_index(i, j, side),
                    i == j ? -1.0 : -1.0 / std::numbers::sqrt2);
      }
    }
  }
  add_entry(out.decoder, "moment.psd", g.psd_offset, psd_cols);

  const std::size_t s = g.sdsos_basis.size();
  g.diag_offset = add_block_if(b, {ConeKind::NonNeg, s});
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t row = b.add_row(0.0);
    b.add_coeff(row, ycol(g.sdsos_basis[i] + g.sdsos_basis[i]), 1.0);
    b.add_coeff(row, g.diag_offset + i, -1.0);
  }
  add_entry(out.decoder, "moment.diag", g.diag_offset, s);

  for (std::size_t j = 1; j < s; ++j) {
    for (std::size_t i = 0; i < j; ++i) g.pairs.emplace_back(i, j);
  }
  g.soc_offset = b.num_vars();
  for (const auto& [i, j] : g.pairs) {
    const std::size_t col = b.add_block({ConeKind::SecondOrder, 3});
    const std::size_t yi = ycol(g.sdsos_basis[i] + g.sdsos_basis[i]);
    const std::size_t yj = ycol(g.sdsos_basis[j] + g.sdsos_basis[j]);
    const std::size_t t = b.add_row(0.0);
    b.add_coeff(t, yi, 1.0);
    b.add_coeff(t, yj, 1.0);
    b.add_coeff(t, col, -1.0);
    const std::size_t u = b.add_row(0.0);
    b.add_coeff(u, yi, 1.0);
    b.add_coeff(u, yj, -1.0);
    b.add_coeff(u, col + 1, -1.0);
    const std::size_t v = b.add_row(0.0);
    b.add_coeff(v, ycol(g.sdsos_basis[i] + g.sdsos_basis[j]), 2.0);
    b.add_coeff(v, col + 2, -1.0);
  }
  add_entry(out.decoder, "moment.soc", g.soc_offset, 3 * g.pairs.size());

  out.conic = b.build();
  out.meta = make_meta(data, plan);
  out.multipliers = std::move(plan.multipliers);
  out.products = std::move(plan.products);
  out.cone = std::move(plan.cone);
  return out;
}

Plan hierarchy_plan(const ProblemData& data, const HierarchyConfig& cfg, RelaxationKind kind) {
  data.validate();
  cfg.validate(data.nvars());
  Plan plan;
  plan.kind = kind;
  plan.cfg = cfg;
  plan.M = resolve_scaling(data).M;
  const auto ghat = scale_constraints(data.g, plan.M);
  for (auto& kp : krivine_products(ghat, cfg.k, data.nvars())) {
    plan.products.emplace_back(std::move(kp.p), std::move(kp.q));
    plan.multipliers.push_back(std::move(kp.h));
  }
  plan.degree = plan_degree(data, plan, matching_degree(data, cfg));
  return plan;
}

Plan exact_plan(const ProblemData& data, int d, RelaxationKind kind) {
  data.validate();
  if (d < 0 || d % 2 != 0) throw std::invalid_argument("exact relaxation: d must be even");
  if (data.f.degree() > d || data.max_constraint_degree() > d) {
    throw std::invalid_argument("exact relaxation: problem degree exceeds d = " + std::to_string(d));
  }
  Plan plan;
  plan.kind = kind;
  plan.cfg = {1, d, 0, data.nvars()};
  plan.multipliers = data.g;
  plan.degree = plan_degree(data, plan, d);
  return plan;
}

Plan crp_plan(const ProblemData& data, const HierarchyConfig& cfg, RelaxationKind kind) {
  if (!data.cone) throw std::invalid_argument("build_crp: problem has no cone constraint");
  Plan plan = hierarchy_plan(data, cfg, kind);
  plan.cone = data.cone;
  plan.degree = plan_degree(data, plan, plan.degree);
  return plan;
}

struct Fnv {
  std::uint64_t h = 14695981039346656037ULL;
  void bytes(const void* p, std::size_t len) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void poly(const Polynomial& p) {
    u64(p.nvars());
    u64(p.num_terms());
    for (const auto& [e, c] : p.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) u64(static_cast<std::uint64_t>(e[i]));
      f64(c);
    }
  }
};

double cone_distance(const ConeLayout& cones, const Eigen::VectorXd& z) {
  double worst = 0.0;
  for (std::size_t k = 0; k < cones.num_blocks(); ++k) {
    const auto& blk = cones.blocks()[k];
    const std::size_t off = cones.offset(k);
    std::vector<double> v(z.data() + off, z.data() + off + blk.size());
    std::vector<double> p = v;
    project_block(blk, p, ConeSide::Primal);
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(v[i] - p[i]));
  }
  return worst;
}

}  // namespace

std::string to_string(RelaxationKind kind) {
  switch (kind) {
    case RelaxationKind::Primal: return "primal";
    case RelaxationKind::Dual: return "dual";
    case RelaxationKind::ExactSocp: return "exact-socp";
    case RelaxationKind::ExactSocpDual: return "exact-socp-dual";
    case RelaxationKind::Crp: return "crp";
    case RelaxationKind::CrpDual: return "crp-dual";
  }
  return "unknown";
}

bool is_dual(RelaxationKind kind) {
  return kind == RelaxationKind::Dual || kind == RelaxationKind::ExactSocpDual ||
         kind == RelaxationKind::CrpDual;
}

const DecoderEntry& Decoder::at(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("Decoder: no entry '" + name + "'");
}

bool Decoder::has(const std::string& name) const {
  return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.name == name; });
}

bool Decoder::covers(std::size_t ncols) const {
  std::size_t next = 0;
  for (const auto& e : entries) {
    if (e.offset != next) return false;
    next += e.size;
  }
  return next == ncols;
}

RelaxationBundle build_primal(const ProblemData& data, const HierarchyConfig& cfg) {
  return assemble_primal(data, hierarchy_plan(data, cfg, RelaxationKind::Primal));
}

RelaxationBundle build_dual(const ProblemData& data, const HierarchyConfig& cfg) {
  return assemble_dual(data, hierarchy_plan(data, cfg, RelaxationKind::Dual));
}

RelaxationBundle build_exact_socp(const ProblemData& data, int d) {
  return assemble_primal(data, exact_plan(data, d, RelaxationKind::ExactSocp));
}

RelaxationBundle build_exact_socp_dual(const ProblemData& data, int d) {
  return assemble_dual(data, exact_plan(data, d, RelaxationKind::ExactSocpDual));
}

RelaxationBundle build_crp(const ProblemData& data, const HierarchyConfig& cfg) {
  return assemble_primal(data, crp_plan(data, cfg, RelaxationKind::Crp));
}

RelaxationBundle build_crp_dual(const ProblemData& data, const HierarchyConfig& cfg) {
  return assemble_dual(data, crp_plan(data, cfg, RelaxationKind::CrpDual));
}

RelaxationResult solve_relaxation(const RelaxationBundle& bundle, const SolveSettings& settings) {
  RelaxationResult out;
  out.report = solve(bundle.conic, settings);
  out.status = out.report.status;
  const double inf = std::numeric_limits<double>::infinity();
  const int sense = bundle.meta.sense;
  switch (out.status) {
    case SolveStatus::Optimal: out.value = sense * out.report.primal_value; break;
    case SolveStatus::PrimalInfeasible: out.value = sense * inf; break;
    case SolveStatus::DualInfeasible: out.value = -sense * inf; break;
    default: out.value = std::numeric_limits<double>::quiet_NaN(); break;
  }
  return out;
}

Certificate decode_certificate(const RelaxationBundle& bundle, const ProblemData& data,
                               const Eigen::VectorXd& z) {
  if (is_dual(bundle.meta.kind)) throw std::invalid_argument("decode_certificate: dual-side bundle");
  const std::span<const double> zs(z.data(), static_cast<std::size_t>(z.size()));
  const std::size_t n = data.nvars();
  Certificate cert;
  cert.mu = z[static_cast<Eigen::Index>(bundle.decoder.at("mu").offset)];
  const auto& ce = bundle.decoder.at("c");
  cert.c.assign(zs.begin() + static_cast<std::ptrdiff_t>(ce.offset),
                zs.begin() + static_cast<std::ptrdiff_t>(ce.offset + ce.size));
  cert.psd_gram = psd_gram(bundle.gram, zs);
  cert.sdsos = sdsos_witness(bundle.gram, zs);

  Polynomial rest = data.f - Polynomial::constant(n, cert.mu) - gram_polynomial(bundle.gram, zs, n);
  for (std::size_t j = 0; j < cert.c.size(); ++j) rest -= bundle.multipliers[j] * cert.c[j];
  if (bundle.cone) {
    const auto& le = bundle.decoder.at("lambda");
    cert.lambda = z.segment(static_cast<Eigen::Index>(le.offset), static_cast<Eigen::Index>(le.size));
    const auto terms = cone_terms(*bundle.cone);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      rest -= *terms[j].first * (terms[j].second * cert.lambda[static_cast<Eigen::Index>(j)]);
    }
  }
  for (const auto& [e, c] : rest.terms()) cert.identity_error = std::max(cert.identity_error, std::abs(c));
  return cert;
}

MomentVector decode_moments(const RelaxationBundle& bundle, const Eigen::VectorXd& z) {
  if (!is_dual(bundle.meta.kind)) throw std::invalid_argument("decode_moments: primal-side bundle");
  const auto& ye = bundle.decoder.at("y");
  MomentVector m;
  m.basis = bundle.rows;
  m.y = z.segment(static_cast<Eigen::Index>(ye.offset), static_cast<Eigen::Index>(ye.size));
  return m;
}

double moment_violation(const RelaxationBundle& bundle, const MomentVector& y) {
  if (!is_dual(bundle.meta.kind)) throw std::invalid_argument("moment_violation: primal-side bundle");
  if (y.basis.exponents() != bundle.rows.exponents()) {
    throw std::invalid_argument("moment_violation: moment basis mismatch");
  }
  const auto& A = bundle.conic.A;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
  const auto& ye = bundle.decoder.at("y");
  z.segment(static_cast<Eigen::Index>(ye.offset), static_cast<Eigen::Index>(ye.size)) = y.y;
  // Every row past the first reads y and places one slack with a nonzero
  // coefficient; solve each row for its slack.
  Eigen::VectorXd ay = A * z;
  const std::size_t yend = ye.offset + ye.size;
  const Eigen::SparseMatrix<double, Eigen::RowMajor, int> R = A;
  for (Eigen::Index r = 1; r < R.rows(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor, int>::InnerIterator it(R, r); it; ++it) {
      if (static_cast<std::size_t>(it.col()) >= yend) {
        z[it.col()] = (bundle.conic.b[r] - ay[r]) / it.value();
      }
    }
  }
  const double eq = (A * z - bundle.conic.b).cwiseAbs().maxCoeff();
  return std::max(eq, cone_distance(bundle.conic.cones, z));
}

std::vector<ConeBlock> cone_inventory(const RelaxationBundle& bundle) {
  std::vector<ConeBlock> out;
  for (const auto& blk : bundle.conic.cones.blocks()) {
    if (blk.kind == ConeKind::PSD || blk.kind == ConeKind::SecondOrder) out.push_back(blk);
  }
  return out;
}

std::uint64_t fingerprint(const ProblemData& data, const HierarchyConfig& cfg, RelaxationKind kind) {
  Fnv h;
  h.u64(static_cast<std::uint64_t>(kind));
  h.poly(data.f);
  h.u64(data.g.size());
  for (const auto& gi : data.g) h.poly(gi);
  h.f64(data.M);
  if (data.box) {
    for (double v : data.box->lo) h.f64(v);
    for (double v : data.box->hi) h.f64(v);
  }
  if (data.cone) {
    h.u64(static_cast<std::uint64_t>(data.cone->set));
    h.u64(data.cone->side);
    for (const auto& e : data.cone->entries) h.poly(e);
  }
  h.u64(static_cast<std::uint64_t>(cfg.k));
  h.u64(static_cast<std::uint64_t>(cfg.r));
  h.u64(cfg.n1);
  h.u64(cfg.n2);
  return h.h;
}

}  // namespace bdcone
