#include "bdcone/conic/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include "bdcone/kernels/kernels.hpp"

namespace bdcone {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal_infeasible";
    case SolveStatus::DualInfeasible: return "dual_infeasible";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

double Residuals::max() const { return std::max({primal, dual, gap}); }

namespace {

using Eigen::VectorXd;
using kernels::CsrMatrix;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDenseFactorLimit = 2500;
constexpr double kMinScale = 1e-4;
constexpr double kMaxScale = 1e4;
constexpr std::size_t kRescaleWindow = 100;
constexpr double kRescaleTrigger = 3.0;
constexpr double kMaxRebalance = 1e6;

double inf_norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

std::span<const double> cspan(const VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> mspan(VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

struct Kernels {
  bool parallel = true;
  void spmv(const CsrMatrix& a, const VectorXd& x, VectorXd& y) const {
    y.resize(a.rows());
    if (parallel) {
      kernels::parallel::spmv(a, cspan(x), mspan(y));
    } else {
      kernels::serial::spmv(a, cspan(x), mspan(y));
    }
  }
  void project(const ConeLayout& layout, std::span<double> v, ConeSide side) const {
    if (parallel) {
      kernels::parallel::project_cones(layout, v, side);
    } else {
      kernels::serial::project_cones(layout, v, side);
    }
  }
};

// Ruiz equilibration with column factors constant on SOC and PSD blocks, so
// that the scaled cone is the cone itself.
struct Scaling {
  VectorXd d;  // rows
  VectorXd e;  // columns
  double sigma_b = 1.0;
  double sigma_c = 1.0;
};

Scaling equilibrate(const ConicProblem& p, int passes, double scale, SparseMatrix& a_hat,
                    VectorXd& b_hat, VectorXd& c_hat) {
  const auto m = static_cast<Eigen::Index>(p.num_rows());
  const auto n = static_cast<Eigen::Index>(p.num_vars());
  Scaling sc;
  sc.d = VectorXd::Ones(m);
  sc.e = VectorXd::Ones(n);
  a_hat = p.A;
  for (int pass = 0; pass < passes; ++pass) {
    VectorXd rn = VectorXd::Zero(m);
    VectorXd cn = VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < a_hat.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(a_hat, j); it; ++it) {
        const double v = std::abs(it.value());
        rn[it.row()] = std::max(rn[it.row()], v);
        cn[j] = std::max(cn[j], v);
      }
    }
    for (std::size_t blk = 0; blk < p.cones.num_blocks(); ++blk) {
      const auto& block = p.cones.blocks()[blk];
      if (block.kind != ConeKind::SecondOrder && block.kind != ConeKind::PSD) continue;
      const auto off = static_cast<Eigen::Index>(p.cones.offset(blk));
      const auto len = static_cast<Eigen::Index>(block.size());
      if (len == 0) continue;
      cn.segment(off, len).setConstant(cn.segment(off, len).maxCoeff());
    }
    VectorXd dr(m);
    VectorXd ec(n);
    for (Eigen::Index i = 0; i < m; ++i) {
      dr[i] = rn[i] > 0 ? 1.0 / std::sqrt(rn[i]) : 1.0;
      dr[i] = std::clamp(sc.d[i] * dr[i], kMinScale, kMaxScale) / sc.d[i];
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      ec[j] = cn[j] > 0 ? 1.0 / std::sqrt(cn[j]) : 1.0;
      ec[j] = std::clamp(sc.e[j] * ec[j], kMinScale, kMaxScale) / sc.e[j];
    }
    a_hat = dr.asDiagonal() * a_hat * ec.asDiagonal();
    sc.d = sc.d.cwiseProduct(dr);
    sc.e = sc.e.cwiseProduct(ec);
  }
  a_hat.makeCompressed();
  b_hat = sc.d.cwiseProduct(p.b);
  c_hat = sc.e.cwiseProduct(p.c);
  const double nb = b_hat.norm();
  const double nc = c_hat.norm();
  sc.sigma_b = scale / (nb > 0 ? nb : 1.0);
  sc.sigma_c = scale / (nc > 0 ? nc : 1.0);
  b_hat *= sc.sigma_b;
  c_hat *= sc.sigma_c;
  return sc;
}

// Solves (2I + A'A) x = r through (2I + AA') with the Woodbury identity.
class NormalSolver {
 public:
  NormalSolver(const SparseMatrix& a, const CsrMatrix& a_csr, const CsrMatrix& at_csr,
               const Kernels& k)
      : a_(a_csr), at_(at_csr), k_(k) {
    const auto m = a.rows();
    if (m == 0) return;
    SparseMatrix aat = a * SparseMatrix(a.transpose());
    SparseMatrix shift(m, m);
    shift.setIdentity();
    aat += 2.0 * shift;
    if (static_cast<std::size_t>(m) <= kDenseFactorLimit) {
      dense_ = std::make_unique<Eigen::LLT<Eigen::MatrixXd>>(Eigen::MatrixXd(aat));
      if (dense_->info() != Eigen::Success) throw std::runtime_error("solve: factorization failed");
    } else {
      sparse_ = std::make_unique<Eigen::SimplicialLLT<SparseMatrix>>(aat);
      if (sparse_->info() != Eigen::Success) throw std::runtime_error("solve: factorization failed");
    }
  }

  void solve(const VectorXd& r, VectorXd& x) {
    if (a_.rows() == 0) {
      x = 0.5 * r;
      return;
    }
    k_.spmv(a_, r, ar_);
    if (dense_) {
      kar_ = dense_->solve(ar_);
    } else {
      kar_ = sparse_->solve(ar_);
    }
    k_.spmv(at_, kar_, atk_);
    x = 0.5 * (r - atk_);
  }

 private:
  const CsrMatrix& a_;
  const CsrMatrix& at_;
  Kernels k_;
  std::unique_ptr<Eigen::LLT<Eigen::MatrixXd>> dense_;
  std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> sparse_;
  VectorXd ar_, kar_, atk_;
};

// Type-II Anderson acceleration with an incrementally maintained Gram matrix.
class Anderson {
 public:
  Anderson(int memory, Eigen::Index dim) : mem_(memory) {
    if (mem_ > 0) {
      df_.resize(dim, mem_);
      dg_.resize(dim, mem_);
      gram_.resize(mem_, mem_);
    }
  }

  void reset() {
    count_ = 0;
    head_ = 0;
    has_prev_ = false;
  }

  // Given g = T(x) and f = g - x, returns the next iterate. `extrapolated`
  // tells whether it differs from g.
  VectorXd step(const VectorXd& g, const VectorXd& f, bool& extrapolated) {
    extrapolated = false;
    if (mem_ <= 0) return g;
    if (has_prev_) {
      df_.col(head_) = f - f_prev_;
      dg_.col(head_) = g - g_prev_;
      count_ = std::min(count_ + 1, mem_);
      for (int j = 0; j < count_; ++j) {
        const double v = df_.col(head_).dot(df_.col(j));
        gram_(head_, j) = v;
        gram_(j, head_) = v;
      }
      head_ = (head_ + 1) % mem_;
    }
    f_prev_ = f;
    g_prev_ = g;
    has_prev_ = true;
    if (count_ == 0) return g;
    const auto gm = gram_.topLeftCorner(count_, count_);
    VectorXd rhs = df_.leftCols(count_).transpose() * f;
    const double reg = 1e-10 * (gm.trace() / count_ + 1e-300);
    Eigen::MatrixXd sys = gm;
    sys.diagonal().array() += reg;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sys);
    if (ldlt.info() != Eigen::Success) {
      reset();
      return g;
    }
    const VectorXd gamma = ldlt.solve(rhs);
    if (!gamma.allFinite()) {
      reset();
      return g;
    }
    extrapolated = true;
    return g - dg_.leftCols(count_) * gamma;
  }

 private:
  int mem_;
  int count_ = 0;
  int head_ = 0;
  bool has_prev_ = false;
  Eigen::MatrixXd df_, dg_, gram_;
  VectorXd f_prev_, g_prev_;
};

CsrMatrix to_csr(const SparseMatrix& a) {
  CsrMatrix out = a;
  out.makeCompressed();
  return out;
}

}  // namespace

Residuals compute_residuals(const ConicProblem& p, const VectorXd& z, const VectorXd& lambda,
                            const VectorXd& s) {
  Residuals r;
  const double pv = p.c.dot(z);
  const double dv = p.b.dot(lambda);
  r.primal = inf_norm(p.A * z - p.b) / (1.0 + inf_norm(p.b));
  r.dual = inf_norm(p.c - p.A.transpose() * lambda - s) / (1.0 + inf_norm(p.c));
  r.gap = std::abs(pv - dv) / (1.0 + std::abs(pv));
  return r;
}

SolveReport solve(const ConicProblem& p, const SolveSettings& st) {
  p.validate();
  if (!(st.alpha > 0.0 && st.alpha < 2.0)) throw std::invalid_argument("solve: alpha outside (0, 2)");
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const Kernels kern{st.parallel};

  const auto m = static_cast<Eigen::Index>(p.num_rows());
  const auto n = static_cast<Eigen::Index>(p.num_vars());
  const Eigen::Index l = m + n;   // y = (y0 in R^m, y1 in R^n)
  const Eigen::Index nu = n + l + 1;  // u = (x, y, tau)

  SparseMatrix a_hat;
  VectorXd b_hat, c_hat;
  Scaling sc = equilibrate(p, st.equilibration_passes, st.scale, a_hat, b_hat, c_hat);
  const CsrMatrix a_csr = to_csr(a_hat);
  const CsrMatrix at_csr = to_csr(SparseMatrix(a_hat.transpose()));
  const CsrMatrix a_orig = to_csr(p.A);
  const CsrMatrix at_orig = to_csr(SparseMatrix(p.A.transpose()));
  NormalSolver normal(a_hat, a_csr, at_csr, kern);

  VectorXd tmp_m, tmp_n;
  // [x; y0; y1] = M^{-1} [a; b0; b1] with M = [[I, At'], [-At, I]], At = [A; -I].
  auto solve_m = [&](const VectorXd& w, VectorXd& out) {
    const auto a = w.head(n);
    const auto b0 = w.segment(n, m);
    const auto b1 = w.segment(n + m, n);
    kern.spmv(at_csr, VectorXd(b0), tmp_n);
    VectorXd r = a - (tmp_n - b1);
    VectorXd x;
    normal.solve(r, x);
    kern.spmv(a_csr, x, tmp_m);
    out.resize(n + l);
    out.head(n) = x;
    out.segment(n, m) = b0 + tmp_m;
    out.segment(n + m, n) = b1 - x;
  };

  VectorXd h(n + l);
  h << c_hat, b_hat, VectorXd::Zero(n);
  VectorXd gvec;
  double hg = 0.0;
  auto refresh_h = [&] {
    h.segment(n, m) = b_hat;
    solve_m(h, gvec);
    hg = h.dot(gvec);
  };
  refresh_h();
  const double sigma_b0 = sc.sigma_b;

  // State x = (u, v); T is one Douglas-Rachford step on the embedding.
  const ConeLayout& layout = p.cones;
  auto apply_t = [&](const VectorXd& state, VectorXd& out) {
    const auto u = state.head(nu);
    const auto v = state.tail(nu);
    VectorXd w = u + v;
    VectorXd pz;
    solve_m(w.head(n + l), pz);
    const double tau_t = (w[nu - 1] + h.dot(pz)) / (1.0 + hg);
    VectorXd ut(nu);
    ut.head(n + l) = pz - tau_t * gvec;
    ut[nu - 1] = tau_t;
    const VectorXd ur = st.alpha * ut + (1.0 - st.alpha) * u;
    VectorXd un = ur - v;
    // x free, y0 free, y1 in K*, tau >= 0.
    kern.project(layout, std::span<double>(un.data() + n + m, static_cast<std::size_t>(n)),
                 ConeSide::Dual);
    un[nu - 1] = std::max(un[nu - 1], 0.0);
    out.resize(2 * nu);
    out.head(nu) = un;
    out.tail(nu) = v - ur + un;
  };

  SolveReport rep;
  VectorXd state = VectorXd::Zero(2 * nu);
  state[nu - 1] = 1.0;
  state[2 * nu - 1] = 1.0;
  VectorXd g, f, g_new, f_new;
  apply_t(state, g);
  f = g - state;
  double nf = f.norm();
  Anderson aa(st.anderson_memory, 2 * nu);
  const double nb_orig = inf_norm(p.b);
  const double nc_orig = inf_norm(p.c);
  const std::size_t check_every = std::max<std::size_t>(1, st.check_every);

  VectorXd z(n), lam(m), s(n), az, atl;
  double log_ratio = 0.0;
  std::size_t ratio_count = 0;
  std::size_t last_rescale = 0;
  double rebalance = 1.0;
  bool have_candidate = false;
  std::size_t it = 0;
  bool done = false;
  bool aborted = false;
  for (; it < st.max_iter && !done; ++it) {
    if (it % check_every == 0 || it + 1 == st.max_iter) {
      const auto u = g.head(nu);
      const auto v = g.tail(nu);
      const double tau = u[nu - 1];
      if (!g.allFinite()) {
        rep.status = SolveStatus::Inconclusive;
        aborted = true;
        break;
      }
      const VectorXd y0 = u.segment(n, m);
      const VectorXd y1 = u.segment(n + m, n);
      const VectorXd s1 = v.segment(n + m, n);
      if (tau > 0) {
        z = sc.e.cwiseProduct(s1) / (tau * sc.sigma_b);
        lam = -sc.d.cwiseProduct(y0) / (tau * sc.sigma_c);
        s = y1.cwiseQuotient(sc.e) / (tau * sc.sigma_c);
        kern.spmv(a_orig, z, az);
        kern.spmv(at_orig, lam, atl);
        const double pv = p.c.dot(z);
        const double dv = p.b.dot(lam);
        Residuals r;
        r.primal = inf_norm(az - p.b) / (1.0 + nb_orig);
        r.dual = inf_norm(p.c - atl - s) / (1.0 + nc_orig);
        r.gap = std::abs(pv - dv) / (1.0 + std::abs(pv));
        rep.residuals = r;
        have_candidate = true;
        if (st.verbose && it % (100 * check_every) == 0) {
          std::fprintf(stderr, "%8zu  pres %.2e  dres %.2e  gap %.2e  pobj % .10e  tau %.2e\n", it,
                       r.primal, r.dual, r.gap, pv, tau);
        }
        if (r.max() <= st.tol) {
          rep.status = SolveStatus::Optimal;
          rep.primal_value = pv;
          rep.dual_value = dv;
          rep.z = z;
          rep.lambda = lam;
          rep.s = s;
          done = true;
          break;
        }
        if (st.adaptive_scale) {
          log_ratio += std::log(std::max(r.primal, 1e-300) / std::max(r.dual, 1e-300));
          ++ratio_count;
        }
      }
      // Farkas ray for the primal: b'lambda > 0, -A'lambda = s in K*.
      {
        VectorXd lr = -sc.d.cwiseProduct(y0);
        const double bl = p.b.dot(lr);
        if (bl > 0) {
          lr /= bl;
          const VectorXd sr = y1.cwiseQuotient(sc.e) / bl;
          kern.spmv(at_orig, lr, atl);
          const double res = inf_norm(atl + sr) * std::max(nb_orig, 1.0);
          if (res <= st.tol) {
            rep.status = SolveStatus::PrimalInfeasible;
            rep.primal_value = kInf;
            rep.dual_value = kInf;
            rep.lambda = lr;
            rep.s = sr;
            rep.certificate_residual = res;
            done = true;
            break;
          }
        }
      }
      // Improving ray: A z = 0, z in K, c'z < 0.
      {
        VectorXd zr = sc.e.cwiseProduct(s1);
        const double cz = p.c.dot(zr);
        if (cz < 0) {
          zr /= -cz;
          kern.spmv(a_orig, zr, az);
          const double res = inf_norm(az) * std::max(nc_orig, 1.0);
          if (res <= st.tol) {
            rep.status = SolveStatus::DualInfeasible;
            rep.primal_value = -kInf;
            rep.dual_value = -kInf;
            rep.z = zr;
            rep.certificate_residual = res;
            done = true;
            break;
          }
        }
      }
      if (st.time_limit > 0 && elapsed() > st.time_limit) {
        rep.status = SolveStatus::Inconclusive;
        aborted = true;
        break;
      }
      if (ratio_count > 0 && it >= last_rescale + kRescaleWindow) {
        // Shift weight toward the lagging residual by rescaling b.
        double beta = std::exp(0.5 * log_ratio / static_cast<double>(ratio_count));
        beta = std::clamp(beta * rebalance, 1.0 / kMaxRebalance, kMaxRebalance) / rebalance;
        log_ratio = 0.0;
        ratio_count = 0;
        last_rescale = it;
        if (beta > kRescaleTrigger || beta < 1.0 / kRescaleTrigger) {
          rebalance *= beta;
          sc.sigma_b = sigma_b0 * rebalance;
          b_hat *= beta;
          refresh_h();
          g.head(n) *= beta;
          g.segment(nu + n, l) *= beta;
          g[2 * nu - 1] *= beta;
          aa.reset();
          apply_t(g, g_new);
          f = g_new - g;
          g.swap(g_new);
          nf = f.norm();
          continue;
        }
      }
    }
    bool extrapolated = false;
    VectorXd next = aa.step(g, f, extrapolated);
    apply_t(next, g_new);
    f_new = g_new - next;
    double nf_new = f_new.norm();
    if (extrapolated && nf_new > nf) {
      // Reject the extrapolated point and take the plain step.
      aa.reset();
      next = g;
      apply_t(next, g_new);
      f_new = g_new - next;
      nf_new = f_new.norm();
    }
    g.swap(g_new);
    f.swap(f_new);
    nf = nf_new;
  }
  if (!done && !aborted) rep.status = SolveStatus::MaxIterations;
  if (!done) {
    if (have_candidate) {
      rep.z = z;
      rep.lambda = lam;
      rep.s = s;
      rep.primal_value = p.c.dot(z);
      rep.dual_value = p.b.dot(lam);
    }
  }
  rep.iterations = it;
  rep.seconds = elapsed();
  return rep;
}

}  // namespace bdcone
