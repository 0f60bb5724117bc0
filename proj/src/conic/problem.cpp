#include "bdcone/conic/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdcone {

void ConicProblem::validate() const {
  const auto n = static_cast<Eigen::Index>(cones.total_size());
  if (c.size() != n) {
    throw std::invalid_argument("ConicProblem: c has " + std::to_string(c.size()) +
                                " entries, cones cover " + std::to_string(n));
  }
  if (A.cols() != n || A.rows() != b.size()) {
    throw std::invalid_argument("ConicProblem: A is " + std::to_string(A.rows()) + "x" +
                                std::to_string(A.cols()) + ", expected " +
                                std::to_string(b.size()) + "x" + std::to_string(n));
  }
  if (!c.allFinite() || !b.allFinite()) throw std::invalid_argument("ConicProblem: non-finite c or b");
  for (Eigen::Index k = 0; k < A.nonZeros(); ++k) {
    if (!std::isfinite(A.valuePtr()[k])) throw std::invalid_argument("ConicProblem: non-finite A");
  }
}

std::size_t ConicBuilder::add_block(ConeBlock block) {
  const std::size_t off = ncols_;
  ncols_ += block.size();
  obj_.resize(ncols_, 0.0);
  blocks_.push_back(block);
  return off;
}

std::size_t ConicBuilder::add_row(double rhs) {
  rhs_.push_back(rhs);
  return rhs_.size() - 1;
}

void ConicBuilder::add_rows(std::size_t count) { rhs_.resize(rhs_.size() + count, 0.0); }

void ConicBuilder::add_coeff(std::size_t row, std::size_t col, double value) {
  if (row >= rhs_.size() || col >= ncols_) {
    throw std::out_of_range("ConicBuilder: entry (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside the problem");
  }
  if (value == 0.0) return;
  triplets_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
}

void ConicBuilder::set_rhs(std::size_t row, double value) { rhs_.at(row) = value; }

void ConicBuilder::set_objective(std::size_t col, double value) { obj_.at(col) = value; }

ConicProblem ConicBuilder::build() const {
  ConicProblem p;
  p.cones = ConeLayout(blocks_);
  p.c = Eigen::Map<const Eigen::VectorXd>(obj_.data(), static_cast<Eigen::Index>(obj_.size()));
  p.b = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
  p.A.resize(static_cast<Eigen::Index>(rhs_.size()), static_cast<Eigen::Index>(ncols_));
  p.A.setFromTriplets(triplets_.begin(), triplets_.end());
  p.A.prune(0.0);
  p.A.makeCompressed();
  return p;
}

}  // namespace bdcone
