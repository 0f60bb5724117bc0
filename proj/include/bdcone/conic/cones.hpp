#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bdcone {

/// Free: R^d. Zero: {0}^d. SecondOrder: {(t, x) : |x| <= t}. PSD: symmetric
/// matrices of side `dim`, stored as the scaled lower-triangular vectorization.
enum class ConeKind { Free, Zero, NonNeg, SecondOrder, PSD };

enum class ConeSide { Primal, Dual };

std::string to_string(ConeKind kind);

struct ConeBlock {
  ConeKind kind = ConeKind::Free;
  /// Vector length, except for PSD where it is the matrix side.
  std::size_t dim = 0;

  /// Number of scalar coordinates the block occupies.
  std::size_t size() const;
  bool operator==(const ConeBlock&) const = default;
};

/// Blocks with their starting offsets in the stacked vector.
class ConeLayout {
 public:
  ConeLayout() = default;
  explicit ConeLayout(std::vector<ConeBlock> blocks);

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t offset(std::size_t block) const { return offsets_[block]; }
  std::size_t total_size() const { return total_; }

 private:
  std::vector<ConeBlock> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// Free and Zero are dual to each other; the others are self-dual.
ConeKind dual_kind(ConeKind kind);

// PSD vectorization: lower triangle stacked column by column, off-diagonal
// entries multiplied by sqrt(2) so that <vec(X), vec(Y)> = trace(X Y).
std::size_t psd_vec_size(std::size_t side);
/// Position of entry (i, j), i >= j, inside the vectorization.
std::size_t psd_vec_index(std::size_t i, std::size_t j, std::size_t side);
/// Inverse of psd_vec_size; throws if `len` is not triangular.
std::size_t psd_side_from_size(std::size_t len);
Eigen::MatrixXd psd_unvec(std::span<const double> v, std::size_t side);
std::vector<double> psd_vec(const Eigen::MatrixXd& m);

/// Euclidean projection onto {(t, x) : |x| <= t}, in place.
void project_soc(std::span<double> v);

/// Projection of a vectorized symmetric matrix onto the PSD cone, in place.
void project_psd(std::span<double> v, std::size_t side);

/// Matrix form of project_psd (eigenvalues clipped at zero). Throws if the
/// input is not symmetric within 1e-10.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s);

/// Projects one block onto its cone (ConeSide::Dual projects onto the dual).
void project_block(const ConeBlock& block, std::span<double> v, ConeSide side);

/// True if `v` lies in the block's cone (or dual) within `tol`.
bool in_cone(const ConeBlock& block, std::span<const double> v, double tol,
             ConeSide side = ConeSide::Primal);

}  // namespace bdcone
