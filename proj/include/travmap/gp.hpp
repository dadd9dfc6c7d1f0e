#pragma once

// Exact Gaussian process regression with an isotropic RBF kernel.
//
//   k(x, x') = sf2 * exp(-|x - x'|^2 / (2 l^2))
//
// Inputs are stored column-wise (dim x n). The system (K + sn2 I) w = y is
// factorised once with LLT; predictions reuse the factor.

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "travmap/common.hpp"

namespace travmap {

template <typename Scalar>
struct RbfHyper {
  Scalar signal_variance = Scalar(0.25);
  Scalar length_scale = Scalar(1.0);
  Scalar noise_variance = Scalar(1e-3);
};

template <typename Scalar>
struct GpPrediction {
  Scalar mean = 0;
  Scalar variance = 0;         ///< of a noisy observation: latent + noise
  Scalar latent_variance = 0;  ///< of the underlying function
};

/// Pairwise RBF kernel between the columns of `a` and `b`.
template <typename Derived1, typename Derived2>
auto rbf_kernel(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b,
                const RbfHyper<typename Derived1::Scalar>& hyper) {
  using Scalar = typename Derived1::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Row = Eigen::Array<Scalar, 1, Eigen::Dynamic>;
  using Col = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Scalar inv = Scalar(-0.5) / (hyper.length_scale * hyper.length_scale);
  const Col an = a.colwise().squaredNorm().transpose().array();
  const Row bn = b.colwise().squaredNorm().array();
  Mat k = (a.transpose() * b).eval();
  for (Eigen::Index c = 0; c < k.cols(); ++c)
    k.col(c) = ((an + bn(c) - Scalar(2) * k.col(c).array()).max(Scalar(0)) * inv).exp() * hyper.signal_variance;
  return k;
}

template <typename Scalar>
class GaussianProcess {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  GaussianProcess() = default;

  /// Throws InvalidInput on empty data or sn2 <= 0, NumericError if the factor
  /// fails even after ten rounds of escalating diagonal jitter.
  GaussianProcess(Mat inputs, Vec targets, const RbfHyper<Scalar>& hyper)
      : inputs_(std::move(inputs)), targets_(std::move(targets)), hyper_(hyper) {
    if (inputs_.cols() == 0) throw InvalidInput("GaussianProcess: no training data");
    if (inputs_.cols() != targets_.size()) throw InvalidInput("GaussianProcess: inputs/targets size mismatch");
    if (!(hyper_.noise_variance > 0) || !(hyper_.signal_variance > 0) || !(hyper_.length_scale > 0))
      throw InvalidInput("GaussianProcess: hyperparameters must be positive");
    if (!inputs_.allFinite() || !targets_.allFinite()) throw InvalidInput("GaussianProcess: non-finite data");
    factorize();
  }

  Eigen::Index size() const { return inputs_.cols(); }
  Eigen::Index dim() const { return inputs_.rows(); }
  const Mat& inputs() const { return inputs_; }
  const Vec& targets() const { return targets_; }
  const Vec& weights() const { return weights_; }
  const RbfHyper<Scalar>& hyper() const { return hyper_; }
  Scalar jitter() const { return jitter_; }
  /// L^-1 of the factor (K + sn2 I) = L L^T, in single precision.
  const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic>& inverse_factor_f() const { return linv_f_; }

  GpPrediction<Scalar> predict(const Vec& x) const {
    const Vec ks = rbf_kernel(inputs_, x, hyper_);
    GpPrediction<Scalar> p;
    p.mean = ks.dot(weights_);
    const Vec v = llt_.matrixL().solve(ks);
    p.latent_variance = std::max(Scalar(0), hyper_.signal_variance - v.squaredNorm());
    p.variance = p.latent_variance + hyper_.noise_variance;
    return p;
  }

  /// Column-wise batch prediction in double precision. `queries` is dim x m.
  template <typename Derived>
  void predict(const Eigen::MatrixBase<Derived>& queries, Vec& mean, Vec& variance) const {
    Mat ks = rbf_kernel(inputs_, queries, hyper_);
    mean.noalias() = ks.transpose() * weights_;
    llt_.matrixL().solveInPlace(ks);
    variance = (hyper_.signal_variance - ks.colwise().squaredNorm().transpose().array()).max(Scalar(0)) +
               hyper_.noise_variance;
  }

 private:
  void factorize() {
    Mat k = rbf_kernel(inputs_, inputs_, hyper_);
    k.diagonal().array() += hyper_.noise_variance;
    jitter_ = 0;
    for (int attempt = 0; attempt <= 10; ++attempt) {
      if (attempt > 0) {
        const Scalar extra = hyper_.noise_variance * std::pow(Scalar(10), Scalar(attempt - 1)) * Scalar(1e-3);
        k.diagonal().array() += extra - jitter_;
        jitter_ = extra;
      }
      llt_.compute(k);
      if (llt_.info() == Eigen::Success) {
        weights_ = llt_.solve(targets_);
        Mat linv = Mat::Identity(k.rows(), k.cols());
        llt_.matrixL().solveInPlace(linv);
        linv_f_ = linv.template cast<float>();
        return;
      }
    }
    throw NumericError("GaussianProcess: factorisation failed after jitter escalation");
  }

  Mat inputs_;
  Vec targets_;
  RbfHyper<Scalar> hyper_;
  Eigen::LLT<Mat> llt_;
  Vec weights_;
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic> linv_f_;
  Scalar jitter_ = 0;
};

}  // namespace travmap
