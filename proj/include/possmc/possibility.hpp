#pragma once

#include <variant>
#include <vector>

#include "possmc/types.hpp"

namespace possmc {

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
class CholeskyFactor {
public:
  CholeskyFactor() = default;
  explicit CholeskyFactor(const Matrix& spd);

  Eigen::Index dim() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }
  double log_det() const { return log_det_; }

  // L^{-1} v
  Vector whiten(const Vector& v) const;
  // v^T S^{-1} v
  double quad_form(const Vector& v) const;
  // L z
  Vector color(const Vector& z) const;

private:
  Matrix lower_;
  double log_det_ = 0.0;
};

// exp(-1/2 (x-mu)^T S^{-1} (x-mu)); the shape S is factored once.
class GaussianPossibility {
public:
  GaussianPossibility(Vector mean, Matrix shape);

  Eigen::Index dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  const Matrix& shape() const { return shape_; }
  const CholeskyFactor& factor() const { return factor_; }

  double operator()(const Vector& x) const;

private:
  Vector mean_;
  Matrix shape_;
  CholeskyFactor factor_;
};

// 1 inside the closed axis-aligned box, 0 outside.
class BoxIndicator {
public:
  BoxIndicator(Vector lower, Vector upper);

  Eigen::Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  double operator()(const Vector& x) const;

private:
  Vector lower_;
  Vector upper_;
};

// 1 at a single point, 0 elsewhere.
class PointIndicator {
public:
  explicit PointIndicator(Vector point) : point_(std::move(point)) {}

  Eigen::Index dim() const { return point_.size(); }
  const Vector& point() const { return point_; }

  double operator()(const Vector& x) const;

private:
  Vector point_;
};

class PossibilityFunction;

// x -> max_i w_i f_i(x). Weights are stored as given; normalized() rescales
// them so that the largest is 1.
class MaxMixture {
public:
  MaxMixture(std::vector<double> weights, std::vector<PossibilityFunction> components);

  static MaxMixture normalized(std::vector<double> weights,
                               std::vector<PossibilityFunction> components);

  Eigen::Index dim() const;
  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<PossibilityFunction>& components() const { return components_; }

  double operator()(const Vector& x) const;

private:
  std::vector<double> weights_;
  std::vector<PossibilityFunction> components_;
};

class PossibilityFunction {
public:
  using Variant = std::variant<GaussianPossibility, BoxIndicator, PointIndicator, MaxMixture>;

  PossibilityFunction(GaussianPossibility f) : impl_(std::move(f)) {}
  PossibilityFunction(BoxIndicator f) : impl_(std::move(f)) {}
  PossibilityFunction(PointIndicator f) : impl_(std::move(f)) {}
  PossibilityFunction(MaxMixture f) : impl_(std::move(f)) {}

  const Variant& variant() const { return impl_; }
  Eigen::Index dim() const;

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&impl_);
  }

private:
  Variant impl_;
};

// Pointwise credibility in [0,1].
double eval(const PossibilityFunction& f, const Vector& x);

// sup_x N(x; a, A) N(x; b, B) = exp(-1/2 (a-b)^T (A+B)^{-1} (a-b)).
double sup_product_gaussian(const Vector& a, const Matrix& A, const Vector& b, const Matrix& B);

// exp(v) with the subnormal range flushed to zero.
inline double clamped_exp(double v) {
  const double e = std::exp(v);
  return e < kTinyValue ? 0.0 : e;
}

}  // namespace possmc
