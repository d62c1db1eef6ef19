#include "possmc/kernel.hpp"

#include <cmath>
#include <numbers>

#include "possmc/angles.hpp"

namespace possmc {

GaussianKernel::GaussianKernel(std::optional<Matrix> matrix, MeanMap map, Eigen::Index input_dim,
                               Matrix shape, std::vector<int> angular)
    : matrix_(std::move(matrix)),
      map_(std::move(map)),
      input_dim_(input_dim),
      shape_(std::move(shape)),
      factor_(shape_),
      angular_(std::move(angular)) {
  for (int a : angular_) {
    if (a < 0 || a >= shape_.rows()) throw InvalidArgument("angular index out of range");
  }
  log_normalizer_ = -0.5 * (static_cast<double>(shape_.rows()) * std::log(2.0 * std::numbers::pi) +
                            factor_.log_det());
}

GaussianKernel GaussianKernel::linear(Matrix map, Matrix shape, std::vector<int> angular) {
  require_dim(map.rows(), shape.rows(), "kernel matrix rows");
  const auto in = map.cols();
  return GaussianKernel(std::move(map), {}, in, std::move(shape), std::move(angular));
}

GaussianKernel GaussianKernel::nonlinear(MeanMap map, Eigen::Index input_dim, Matrix shape,
                                         std::vector<int> angular) {
  if (!map) throw InvalidArgument("kernel mean map is empty");
  return GaussianKernel(std::nullopt, std::move(map), input_dim, std::move(shape),
                        std::move(angular));
}

Vector GaussianKernel::mean(const Vector& given) const {
  require_dim(given.size(), input_dim_, "kernel conditioning point");
  Vector m = matrix_ ? Vector(*matrix_ * given) : map_(given);
  require_dim(m.size(), output_dim(), "kernel mean map output");
  return m;
}

Vector GaussianKernel::displacement(const Vector& x, const Vector& given) const {
  require_dim(x.size(), output_dim(), "kernel argument");
  Vector d = x - mean(given);
  for (int a : angular_) d[a] = wrap_angle(d[a]);
  return d;
}

Vector GaussianKernel::wrap(Vector x) const {
  for (int a : angular_) x[a] = wrap_angle(x[a]);
  return x;
}

double GaussianKernel::log_possibility(const Vector& x, const Vector& given) const {
  return -0.5 * factor_.quad_form(displacement(x, given));
}

double GaussianKernel::possibility(const Vector& x, const Vector& given) const {
  return clamped_exp(log_possibility(x, given));
}

double GaussianKernel::log_density(const Vector& x, const Vector& given) const {
  return log_normalizer_ + log_possibility(x, given);
}

double GaussianKernel::density(const Vector& x, const Vector& given) const {
  return clamped_exp(log_density(x, given));
}

GaussianPossibility GaussianKernel::at(const Vector& given) const {
  return GaussianPossibility(mean(given), shape_);
}

}  // namespace possmc
