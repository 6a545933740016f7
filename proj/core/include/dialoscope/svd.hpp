#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace dialoscope {

struct TruncatedSvd {
  Eigen::MatrixXd U;   // m x rank
  Eigen::VectorXd S;   // rank
  Eigen::MatrixXd V;   // n x rank
};

/// Seeded randomized truncated SVD by subspace iteration. Deterministic for a
/// given seed: Gaussian range sketch with `oversample` extra columns,
/// re-orthonormalized power iterations until the singular-value estimates
/// move by less than `tol` (relative), then an exact SVD of the projected
/// matrix. Ranks beyond min(m, n) are clamped.
TruncatedSvd randomized_svd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                            int rank, std::uint64_t seed, double tol = 1e-10,
                            int oversample = 10, int max_iterations = 100);

}  // namespace dialoscope
