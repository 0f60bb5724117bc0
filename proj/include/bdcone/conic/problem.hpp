#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "bdcone/conic/cones.hpp"

namespace bdcone {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// minimize c'z  subject to  A z = b,  z in K = K_1 x ... x K_p.
struct ConicProblem {
  Eigen::VectorXd c;
  SparseMatrix A;
  Eigen::VectorXd b;
  ConeLayout cones;

  std::size_t num_vars() const { return static_cast<std::size_t>(c.size()); }
  std::size_t num_rows() const { return static_cast<std::size_t>(b.size()); }

  /// Throws std::invalid_argument when dimensions or values are inconsistent.
  void validate() const;
};

/// Incremental assembly of a ConicProblem. Blocks are appended left to right;
/// duplicate (row, col) entries are summed.
class ConicBuilder {
 public:
  /// Appends a block and returns the column offset of its first coordinate.
  std::size_t add_block(ConeBlock block);
  /// Appends an equality row with the given right-hand side.
  std::size_t add_row(double rhs = 0.0);
  void add_rows(std::size_t count);

  void add_coeff(std::size_t row, std::size_t col, double value);
  void set_rhs(std::size_t row, double value);
  void set_objective(std::size_t col, double value);

  std::size_t num_vars() const { return ncols_; }
  std::size_t num_rows() const { return rhs_.size(); }

  ConicProblem build() const;

 private:
  std::vector<ConeBlock> blocks_;
  std::size_t ncols_ = 0;
  std::vector<double> rhs_;
  std::vector<double> obj_;
  std::vector<Eigen::Triplet<double, int>> triplets_;
};

}  // namespace bdcone
