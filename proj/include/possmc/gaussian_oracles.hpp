#pragma once

#include "possmc/types.hpp"

namespace possmc {

struct GaussianBelief {
  Vector mean;
  Matrix cov;
};

// Standard Kalman predict + update with gain P H^T (H P H^T + R)^{-1}.
GaussianBelief kalman_step(const GaussianBelief& belief, const Matrix& F, const Matrix& Q,
                           const Matrix& H, const Matrix& R, const Vector& y);

// Closed-form recursion on Gaussian possibility functions: the supremum over
// the previous state gives (F m, F P F^T + Q); multiplying by the observation
// possibility and completing the square gives the posterior parameters in
// information form.
GaussianBelief gaussian_possibility_step(const GaussianBelief& belief, const Matrix& F,
                                         const Matrix& Q, const Matrix& H, const Matrix& R,
                                         const Vector& y);

}  // namespace possmc
