#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "possmc/possibility.hpp"

namespace possmc {

// Conditional Gaussian possibility x' -> N(. ; m(x'), S), also usable as the
// matching probability density. The mean map is either a matrix or an
// arbitrary function; coordinates listed as angular are compared through their
// wrapped difference and wrapped after sampling.
class GaussianKernel {
public:
  using MeanMap = std::function<Vector(const Vector&)>;

  static GaussianKernel linear(Matrix map, Matrix shape, std::vector<int> angular = {});
  static GaussianKernel nonlinear(MeanMap map, Eigen::Index input_dim, Matrix shape,
                                  std::vector<int> angular = {});

  Eigen::Index input_dim() const { return input_dim_; }
  Eigen::Index output_dim() const { return shape_.rows(); }
  const Matrix& shape() const { return shape_; }
  const CholeskyFactor& factor() const { return factor_; }
  const std::vector<int>& angular() const { return angular_; }

  // Set only for linear kernels.
  const std::optional<Matrix>& matrix() const { return matrix_; }
  bool is_linear_euclidean() const { return matrix_.has_value() && angular_.empty(); }

  Vector mean(const Vector& given) const;
  Vector displacement(const Vector& x, const Vector& given) const;
  Vector wrap(Vector x) const;

  double log_possibility(const Vector& x, const Vector& given) const;
  double possibility(const Vector& x, const Vector& given) const;
  double log_density(const Vector& x, const Vector& given) const;
  double density(const Vector& x, const Vector& given) const;

  // Normalizing constant of the density, (2 pi)^{-d/2} |S|^{-1/2}, in log.
  double log_normalizer() const { return log_normalizer_; }

  GaussianPossibility at(const Vector& given) const;

private:
  GaussianKernel(std::optional<Matrix> matrix, MeanMap map, Eigen::Index input_dim, Matrix shape,
                 std::vector<int> angular);

  std::optional<Matrix> matrix_;
  MeanMap map_;
  Eigen::Index input_dim_ = 0;
  Matrix shape_;
  CholeskyFactor factor_;
  std::vector<int> angular_;
  double log_normalizer_ = 0.0;
};

}  // namespace possmc
