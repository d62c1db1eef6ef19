#include "possmc/gaussian_oracles.hpp"

namespace possmc {

namespace {

void check_shapes(const GaussianBelief& b, const Matrix& F, const Matrix& Q, const Matrix& H,
                  const Matrix& R, const Vector& y) {
  const auto d = b.mean.size();
  require_dim(b.cov.rows(), d, "belief covariance");
  require_dim(b.cov.cols(), d, "belief covariance");
  require_dim(F.cols(), d, "transition matrix");
  require_dim(F.rows(), d, "transition matrix");
  require_dim(Q.rows(), d, "process covariance");
  require_dim(H.cols(), d, "observation matrix");
  require_dim(R.rows(), H.rows(), "observation covariance");
  require_dim(y.size(), H.rows(), "observation");
}

}  // namespace

GaussianBelief kalman_step(const GaussianBelief& belief, const Matrix& F, const Matrix& Q,
                           const Matrix& H, const Matrix& R, const Vector& y) {
  check_shapes(belief, F, Q, H, R, y);
  const Vector m = F * belief.mean;
  const Matrix P = F * belief.cov * F.transpose() + Q;
  const Matrix S = H * P * H.transpose() + R;
  Eigen::FullPivLU<Matrix> lu(S);
  if (!lu.isInvertible()) throw NotPositiveDefinite("singular innovation covariance");
  const Matrix K = P * H.transpose() * lu.inverse();
  GaussianBelief out;
  out.mean = m + K * (y - H * m);
  const Matrix I = Matrix::Identity(m.size(), m.size());
  // Joseph form keeps the covariance symmetric.
  out.cov = (I - K * H) * P * (I - K * H).transpose() + K * R * K.transpose();
  return out;
}

GaussianBelief gaussian_possibility_step(const GaussianBelief& belief, const Matrix& F,
                                         const Matrix& Q, const Matrix& H, const Matrix& R,
                                         const Vector& y) {
  check_shapes(belief, F, Q, H, R, y);
  const Vector m = F * belief.mean;
  const Matrix P = F * belief.cov * F.transpose() + Q;

  Eigen::LLT<Matrix> p_llt(P);
  Eigen::LLT<Matrix> r_llt(R);
  if (p_llt.info() != Eigen::Success || r_llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("predicted or observation shape is not positive-definite");
  }
  const Matrix P_inv = p_llt.solve(Matrix::Identity(P.rows(), P.cols()));
  const Matrix Ht_Rinv = r_llt.solve(H).transpose();
  const Matrix info = P_inv + Ht_Rinv * H;
  Eigen::LLT<Matrix> info_llt(info);
  if (info_llt.info() != Eigen::Success) throw NotPositiveDefinite("posterior information singular");

  GaussianBelief out;
  out.cov = info_llt.solve(Matrix::Identity(info.rows(), info.cols()));
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  out.mean = info_llt.solve(P_inv * m + Ht_Rinv * y);
  return out;
}

}  // namespace possmc
