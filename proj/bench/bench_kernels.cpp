#include <vector>

#include <benchmark/benchmark.h>

#include "bdcone/hierarchy/problems.hpp"
#include "bdcone/hierarchy/relaxation.hpp"
#include "bdcone/kernels/kernels.hpp"

using namespace bdcone;

namespace {

const RelaxationBundle& ep1_bundle(std::size_t n) {
  static std::vector<std::pair<std::size_t, RelaxationBundle>> cache;
  for (const auto& [key, b] : cache) {
    if (key == n) return b;
  }
  cache.emplace_back(n, build_primal(make_ep1(n), {2, 4, 0, n}));
  return cache.back().second;
}

std::vector<double> ramp(std::size_t size) {
  std::vector<double> v(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = static_cast<double>(i % 17) - 8.0;
  return v;
}

template <bool Parallel>
void BM_spmv(benchmark::State& state) {
  const auto& p = ep1_bundle(static_cast<std::size_t>(state.range(0))).conic;
  const kernels::CsrMatrix a = p.A;
  const auto x = ramp(static_cast<std::size_t>(a.cols()));
  std::vector<double> y(static_cast<std::size_t>(a.rows()));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::spmv(a, x, y);
    } else {
      kernels::serial::spmv(a, x, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(a.nonZeros());
}

template <bool Parallel>
void BM_project_cones(benchmark::State& state) {
  const auto& p = ep1_bundle(static_cast<std::size_t>(state.range(0))).conic;
  const auto base = ramp(p.num_vars());
  std::vector<double> v(base.size());
  for (auto _ : state) {
    v = base;
    if constexpr (Parallel) {
      kernels::parallel::project_cones(p.cones, v, ConeSide::Primal);
    } else {
      kernels::serial::project_cones(p.cones, v, ConeSide::Primal);
    }
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["blocks"] = static_cast<double>(p.cones.num_blocks());
}

template <bool Parallel>
void BM_krivine_products(benchmark::State& state) {
  const auto data = make_ep1(static_cast<std::size_t>(state.range(0)));
  const auto ghat = scale_constraints(data.g, resolve_scaling(data).M);
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto prods = Parallel ? kernels::parallel::krivine_products(ghat, k, data.nvars())
                          : kernels::serial::krivine_products(ghat, k, data.nvars());
    benchmark::DoNotOptimize(prods.data());
  }
}

template <bool Parallel>
void BM_solve(benchmark::State& state) {
  const auto bundle = build_exact_socp(make_ep1(6), 4);
  SolveSettings s;
  s.parallel = Parallel;
  for (auto _ : state) {
    auto rep = solve(bundle.conic, s);
    benchmark::DoNotOptimize(rep.primal_value);
  }
}

}  // namespace

BENCHMARK(BM_spmv<false>)->Name("spmv/serial")->Arg(6)->Arg(10);
BENCHMARK(BM_spmv<true>)->Name("spmv/parallel")->Arg(6)->Arg(10);
BENCHMARK(BM_project_cones<false>)->Name("project_cones/serial")->Arg(6)->Arg(10);
BENCHMARK(BM_project_cones<true>)->Name("project_cones/parallel")->Arg(6)->Arg(10);
BENCHMARK(BM_krivine_products<false>)->Name("krivine_products/serial")->Args({6, 2})->Args({6, 3});
BENCHMARK(BM_krivine_products<true>)->Name("krivine_products/parallel")->Args({6, 2})->Args({6, 3});
BENCHMARK(BM_solve<false>)->Name("solve/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve<true>)->Name("solve/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
