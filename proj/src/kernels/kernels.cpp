#include "bdcone/kernels/kernels.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bdcone::kernels {

namespace {

// Below these sizes the fork/join cost exceeds the work.
constexpr std::size_t kMinParallelRows = 4096;
constexpr std::size_t kMinParallelBlocks = 64;

struct PowerCache {
  // g[i][a] = ghat_i^a and one_minus[i][b] = (1 - ghat_i)^b.
  std::vector<std::vector<Polynomial>> g;
  std::vector<std::vector<Polynomial>> one_minus;
};

std::size_t resolve_nvars(std::span<const Polynomial> ghat, std::size_t nvars) {
  if (ghat.empty()) return nvars;
  const std::size_t n = ghat.front().nvars();
  for (const auto& gi : ghat) {
    if (gi.nvars() != n) throw std::invalid_argument("krivine_products: mixed nvars");
  }
  if (nvars != 0 && nvars != n) throw std::invalid_argument("krivine_products: nvars mismatch");
  return n;
}

PowerCache build_cache(std::span<const Polynomial> ghat, int k, std::size_t n) {
  PowerCache c;
  const Polynomial one = Polynomial::constant(n, 1.0);
  for (const auto& gi : ghat) {
    std::vector<Polynomial> gp{one};
    std::vector<Polynomial> qp{one};
    const Polynomial omg = one - gi;
    for (int a = 1; a <= k; ++a) {
      gp.push_back(gp.back() * gi);
      qp.push_back(qp.back() * omg);
    }
    c.g.push_back(std::move(gp));
    c.one_minus.push_back(std::move(qp));
  }
  return c;
}

Polynomial product(const PowerCache& c, const std::vector<int>& p, const std::vector<int>& q,
                   std::size_t n) {
  Polynomial h = Polynomial::constant(n, 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0) h = h * c.g[i][static_cast<std::size_t>(p[i])];
    if (q[i] > 0) h = h * c.one_minus[i][static_cast<std::size_t>(q[i])];
  }
  return h;
}

std::vector<KrivineProduct> skeleton(std::size_t m, int k) {
  std::vector<KrivineProduct> out;
  for (auto& [p, q] : krivine_indices(m, k)) {
    out.push_back(KrivineProduct{std::move(p), std::move(q), Polynomial()});
  }
  return out;
}

void check_spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (static_cast<std::size_t>(a.cols()) != x.size() ||
      static_cast<std::size_t>(a.rows()) != y.size()) {
    throw std::invalid_argument("spmv: dimension mismatch");
  }
}

inline double row_dot(const CsrMatrix& a, Eigen::Index r, std::span<const double> x) {
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const double* val = a.valuePtr();
  double s = 0.0;
  for (int t = outer[r]; t < outer[r + 1]; ++t) s += val[t] * x[static_cast<std::size_t>(inner[t])];
  return s;
}

std::span<double> block_span(const ConeLayout& layout, std::span<double> v, std::size_t b) {
  return v.subspan(layout.offset(b), layout.blocks()[b].size());
}

}  // namespace

namespace serial {

std::vector<KrivineProduct> krivine_products(std::span<const Polynomial> ghat, int k,
                                             std::size_t nvars) {
  const std::size_t n = resolve_nvars(ghat, nvars);
  const PowerCache cache = build_cache(ghat, k, n);
  auto out = skeleton(ghat.size(), k);
  for (auto& t : out) t.h = product(cache, t.p, t.q, n);
  return out;
}

void project_cones(const ConeLayout& layout, std::span<double> v, ConeSide side) {
  for (std::size_t b = 0; b < layout.num_blocks(); ++b) {
    project_block(layout.blocks()[b], block_span(layout, v, b), side);
  }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x, y);
  for (Eigen::Index r = 0; r < a.rows(); ++r) y[static_cast<std::size_t>(r)] = row_dot(a, r, x);
}

}  // namespace serial

namespace parallel {

std::vector<KrivineProduct> krivine_products(std::span<const Polynomial> ghat, int k,
                                             std::size_t nvars) {
  const std::size_t n = resolve_nvars(ghat, nvars);
  const PowerCache cache = build_cache(ghat, k, n);
  auto out = skeleton(ghat.size(), k);
  const auto count = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < count; ++i) {
    auto& t = out[static_cast<std::size_t>(i)];
    t.h = product(cache, t.p, t.q, n);
  }
  return out;
}

void project_cones(const ConeLayout& layout, std::span<double> v, ConeSide side) {
  const auto nb = static_cast<long>(layout.num_blocks());
#pragma omp parallel for schedule(dynamic, 16) if (layout.num_blocks() >= kMinParallelBlocks)
  for (long b = 0; b < nb; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    project_block(layout.blocks()[ub], block_span(layout, v, ub), side);
  }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x, y);
  const Eigen::Index rows = a.rows();
#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(rows) >= kMinParallelRows)
  for (Eigen::Index r = 0; r < rows; ++r) y[static_cast<std::size_t>(r)] = row_dot(a, r, x);
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace bdcone::kernels
