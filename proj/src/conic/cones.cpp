#include "bdcone/conic/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bdcone {

std::string to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Free: return "free";
    case ConeKind::Zero: return "zero";
    case ConeKind::NonNeg: return "nonneg";
    case ConeKind::SecondOrder: return "soc";
    case ConeKind::PSD: return "psd";
  }
  return "?";
}

std::size_t ConeBlock::size() const {
  return kind == ConeKind::PSD ? psd_vec_size(dim) : dim;
}

ConeLayout::ConeLayout(std::vector<ConeBlock> blocks) : blocks_(std::move(blocks)) {
  offsets_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    if (b.kind == ConeKind::SecondOrder && b.dim == 0) {
      throw std::invalid_argument("ConeLayout: second-order block of dimension 0");
    }
    offsets_.push_back(total_);
    total_ += b.size();
  }
}

ConeKind dual_kind(ConeKind kind) {
  if (kind == ConeKind::Free) return ConeKind::Zero;
  if (kind == ConeKind::Zero) return ConeKind::Free;
  return kind;
}

std::size_t psd_vec_size(std::size_t side) { return side * (side + 1) / 2; }

std::size_t psd_vec_index(std::size_t i, std::size_t j, std::size_t side) {
  if (i < j) std::swap(i, j);
  // Column j starts after columns 0..j-1, which hold side, side-1, ... entries.
  return j * side - j * (j - 1) / 2 + (i - j);
}

std::size_t psd_side_from_size(std::size_t len) {
  std::size_t side = static_cast<std::size_t>(
      std::floor((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0));
  while (psd_vec_size(side) < len) ++side;
  while (side > 0 && psd_vec_size(side) > len) --side;
  if (psd_vec_size(side) != len) {
    throw std::invalid_argument("psd_side_from_size: " + std::to_string(len) +
                                " is not a triangular number");
  }
  return side;
}

Eigen::MatrixXd psd_unvec(std::span<const double> v, std::size_t side) {
  if (v.size() != psd_vec_size(side)) throw std::invalid_argument("psd_unvec: size mismatch");
  Eigen::MatrixXd m(side, side);
  std::size_t k = 0;
  for (std::size_t j = 0; j < side; ++j) {
    m(j, j) = v[k++];
    for (std::size_t i = j + 1; i < side; ++i) {
      const double x = v[k++] / std::numbers::sqrt2;
      m(i, j) = x;
      m(j, i) = x;
    }
  }
  return m;
}

std::vector<double> psd_vec(const Eigen::MatrixXd& m) {
  const auto side = static_cast<std::size_t>(m.rows());
  std::vector<double> v;
  v.reserve(psd_vec_size(side));
  for (std::size_t j = 0; j < side; ++j) {
    v.push_back(m(j, j));
    for (std::size_t i = j + 1; i < side; ++i) {
      v.push_back(std::numbers::sqrt2 * 0.5 * (m(i, j) + m(j, i)));
    }
  }
  return v;
}

void project_soc(std::span<double> v) {
  if (v.empty()) return;
  const double t = v[0];
  double nx2 = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) nx2 += v[i] * v[i];
  const double nx = std::sqrt(nx2);
  if (nx <= t) return;
  if (nx <= -t) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  const double a = 0.5 * (t + nx);
  v[0] = a;
  const double s = a / nx;
  for (std::size_t i = 1; i < v.size(); ++i) v[i] *= s;
}

namespace {

Eigen::MatrixXd clip_eigen(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("project_psd: eigensolver did not converge");
  }
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& q = es.eigenvectors();
  return q * lam.asDiagonal() * q.transpose();
}

}  // namespace

void project_psd(std::span<double> v, std::size_t side) {
  if (side == 0) return;
  if (side == 1) {
    v[0] = std::max(v[0], 0.0);
    return;
  }
  const Eigen::MatrixXd p = clip_eigen(psd_unvec(v, side));
  std::size_t k = 0;
  for (std::size_t j = 0; j < side; ++j) {
    v[k++] = p(j, j);
    for (std::size_t i = j + 1; i < side; ++i) v[k++] = std::numbers::sqrt2 * p(i, j);
  }
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("project_psd: matrix is not square");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("project_psd: matrix is not symmetric");
  }
  return clip_eigen(0.5 * (s + s.transpose()));
}

void project_block(const ConeBlock& block, std::span<double> v, ConeSide side) {
  const ConeKind kind = side == ConeSide::Primal ? block.kind : dual_kind(block.kind);
  switch (kind) {
    case ConeKind::Free: return;
    case ConeKind::Zero: std::fill(v.begin(), v.end(), 0.0); return;
    case ConeKind::NonNeg:
      for (double& x : v) x = std::max(x, 0.0);
      return;
    case ConeKind::SecondOrder: project_soc(v); return;
    case ConeKind::PSD: project_psd(v, block.dim); return;
  }
}

bool in_cone(const ConeBlock& block, std::span<const double> v, double tol, ConeSide side) {
  const ConeKind kind = side == ConeSide::Primal ? block.kind : dual_kind(block.kind);
  switch (kind) {
    case ConeKind::Free: return true;
    case ConeKind::Zero:
      return std::all_of(v.begin(), v.end(), [&](double x) { return std::abs(x) <= tol; });
    case ConeKind::NonNeg:
      return std::all_of(v.begin(), v.end(), [&](double x) { return x >= -tol; });
    case ConeKind::SecondOrder: {
      double nx2 = 0.0;
      for (std::size_t i = 1; i < v.size(); ++i) nx2 += v[i] * v[i];
      return std::sqrt(nx2) <= v[0] + tol;
    }
    case ConeKind::PSD: {
      if (block.dim == 0) return true;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(psd_unvec(v, block.dim),
                                                        Eigen::EigenvaluesOnly);
      return es.eigenvalues().minCoeff() >= -tol;
    }
  }
  return false;
}

}  // namespace bdcone
