#include "possmc/possibility.hpp"

#include <algorithm>
#include <cmath>

namespace possmc {

CholeskyFactor::CholeskyFactor(const Matrix& spd) {
  if (spd.rows() != spd.cols()) {
    throw DimensionError("covariance shape must be square");
  }
  if (!spd.isApprox(spd.transpose(), 1e-10)) {
    throw NotPositiveDefinite("covariance shape is not symmetric");
  }
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("covariance shape is not positive-definite");
  }
  lower_ = llt.matrixL();
  const Vector diag = lower_.diagonal();
  if ((diag.array() <= 0.0).any()) {
    throw NotPositiveDefinite("covariance shape is singular");
  }
  log_det_ = 2.0 * diag.array().log().sum();
}

Vector CholeskyFactor::whiten(const Vector& v) const {
  require_dim(v.size(), dim(), "whiten");
  return lower_.triangularView<Eigen::Lower>().solve(v);
}

double CholeskyFactor::quad_form(const Vector& v) const { return whiten(v).squaredNorm(); }

Vector CholeskyFactor::color(const Vector& z) const {
  require_dim(z.size(), dim(), "color");
  return lower_.triangularView<Eigen::Lower>() * z;
}

GaussianPossibility::GaussianPossibility(Vector mean, Matrix shape)
    : mean_(std::move(mean)), shape_(std::move(shape)) {
  require_dim(shape_.rows(), mean_.size(), "Gaussian possibility shape");
  factor_ = CholeskyFactor(shape_);
}

double GaussianPossibility::operator()(const Vector& x) const {
  require_dim(x.size(), dim(), "Gaussian possibility");
  return clamped_exp(-0.5 * factor_.quad_form(x - mean_));
}

BoxIndicator::BoxIndicator(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  require_dim(upper_.size(), lower_.size(), "box bounds");
  if ((upper_.array() < lower_.array()).any()) {
    throw InvalidArgument("box upper bound below lower bound");
  }
}

double BoxIndicator::operator()(const Vector& x) const {
  require_dim(x.size(), dim(), "box indicator");
  return ((x.array() >= lower_.array()) && (x.array() <= upper_.array())).all() ? 1.0 : 0.0;
}

double PointIndicator::operator()(const Vector& x) const {
  require_dim(x.size(), dim(), "point indicator");
  return x == point_ ? 1.0 : 0.0;
}

MaxMixture::MaxMixture(std::vector<double> weights, std::vector<PossibilityFunction> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (weights_.empty() || weights_.size() != components_.size()) {
    throw InvalidArgument("max-mixture needs one weight per component");
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("max-mixture weight must be >= 0");
  }
  const double top = *std::max_element(weights_.begin(), weights_.end());
  if (std::abs(top - 1.0) > 1e-12) throw InvalidArgument("max-mixture weights must have maximum 1");
  const auto d = components_.front().dim();
  for (const auto& c : components_) require_dim(c.dim(), d, "max-mixture component");
}

MaxMixture MaxMixture::normalized(std::vector<double> weights,
                                  std::vector<PossibilityFunction> components) {
  const double top = weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
  if (!(top > 0.0)) throw InvalidArgument("max-mixture weights are all zero");
  for (double& w : weights) w /= top;
  return MaxMixture(std::move(weights), std::move(components));
}

Eigen::Index MaxMixture::dim() const { return components_.front().dim(); }

double MaxMixture::operator()(const Vector& x) const {
  double best = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] <= best) continue;
    best = std::max(best, weights_[i] * eval(components_[i], x));
  }
  return best < kTinyValue ? 0.0 : best;
}

Eigen::Index PossibilityFunction::dim() const {
  return std::visit([](const auto& f) { return f.dim(); }, impl_);
}

double eval(const PossibilityFunction& f, const Vector& x) {
  return std::visit([&](const auto& g) { return g(x); }, f.variant());
}

double sup_product_gaussian(const Vector& a, const Matrix& A, const Vector& b, const Matrix& B) {
  require_dim(b.size(), a.size(), "sup_product_gaussian means");
  require_dim(A.rows(), a.size(), "sup_product_gaussian shape A");
  require_dim(B.rows(), a.size(), "sup_product_gaussian shape B");
  const CholeskyFactor sum(A + B);
  return clamped_exp(-0.5 * sum.quad_form(a - b));
}

}  // namespace possmc
