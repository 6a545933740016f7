#include "dialoscope/svd.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace dialoscope {

namespace {

/// Portable seeded standard normals: Box-Muller over mt19937_64 output, so
/// the sketch does not depend on the standard library's distribution
/// implementation.
class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

private:
  double uniform01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

TruncatedSvd randomized_svd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                            int rank, std::uint64_t seed, double tol, int oversample,
                            int max_iterations) {
  const Eigen::Index m = matrix.rows();
  const Eigen::Index n = matrix.cols();
  const int k = std::min<Eigen::Index>(rank, std::min(m, n));
  const Eigen::Index l = std::min<Eigen::Index>(k + oversample, std::min(m, n));

  TruncatedSvd out;
  out.U = Eigen::MatrixXd::Zero(m, rank);
  out.S = Eigen::VectorXd::Zero(rank);
  out.V = Eigen::MatrixXd::Zero(n, rank);
  if (k <= 0 || l <= 0) return out;

  GaussianSource gauss(seed);
  Eigen::MatrixXd omega(n, l);
  for (Eigen::Index j = 0; j < l; ++j)
    for (Eigen::Index i = 0; i < n; ++i) omega(i, j) = gauss.next();

  Eigen::MatrixXd y = matrix * omega;  // m x l
  Eigen::MatrixXd q = thin_q(y);

  Eigen::VectorXd estimates = Eigen::VectorXd::Zero(l);
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::MatrixXd z = matrix.transpose() * q;  // n x l
    Eigen::MatrixXd qz = thin_q(z);
    y = matrix * qz;  // m x l
    Eigen::VectorXd new_estimates = y.colwise().norm();

    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      double denom = std::max(new_estimates(i), 1e-300);
      worst = std::max(worst, std::abs(new_estimates(i) - estimates(i)) / denom);
    }
    estimates = new_estimates;
    q = thin_q(y);
    if (worst < tol) break;
    if (estimates.head(k).maxCoeff() == 0.0) break;  // (numerically) zero matrix
  }

  Eigen::MatrixXd b_t = matrix.transpose() * q;  // n x l, B = q^T A
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b_t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // B^T = Ub S Vb^T  =>  A ~ q B = (q Vb) S Ub^T
  out.U.leftCols(k) = q * svd.matrixV().leftCols(k);
  out.S.head(k) = svd.singularValues().head(k);
  out.V.leftCols(k) = svd.matrixU().leftCols(k);
  return out;
}

}  // namespace dialoscope
