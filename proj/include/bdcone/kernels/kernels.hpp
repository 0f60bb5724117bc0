#pragma once

// Data-parallel kernels used by the relaxation builders and the conic solver.
// Every kernel exists twice: `parallel::` (OpenMP) and `serial::` (reference).
// The parallel versions partition work into independent items and never
// reduce floating-point values across threads, so both produce bit-identical
// output for identical input.

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "bdcone/conic/cones.hpp"
#include "bdcone/polycore/krivine.hpp"

namespace bdcone::kernels {

using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

namespace serial {

std::vector<KrivineProduct> krivine_products(std::span<const Polynomial> ghat, int k,
                                             std::size_t nvars);

/// Projects every block of `v` onto its cone (or onto the dual cone).
void project_cones(const ConeLayout& layout, std::span<double> v, ConeSide side);

/// y = A x.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

}  // namespace serial

namespace parallel {

std::vector<KrivineProduct> krivine_products(std::span<const Polynomial> ghat, int k,
                                             std::size_t nvars);
void project_cones(const ConeLayout& layout, std::span<double> v, ConeSide side);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

}  // namespace parallel

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace bdcone::kernels
