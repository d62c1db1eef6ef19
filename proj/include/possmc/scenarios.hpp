#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "possmc/angles.hpp"
#include "possmc/kernel.hpp"
#include "possmc/multi_filter.hpp"
#include "possmc/particle_filter.hpp"

namespace possmc {

// [[1, dt], [0, 1]]
Matrix ncv_transition(double dt);
// [[dt^4/3, dt^3/2], [dt^3/2, dt^2]]
Matrix ncv_shape(double dt);
// Block-diagonal repetition of a square block.
Matrix block_diag(const Matrix& block, int copies);

// Nearly-constant-velocity model in `planes` independent axes, Gaussian
// process noise sigma * N(0, Q) and observation noise varsigma * N(0, I) on
// the position coordinates.
struct LinearGaussianModel {
  int planes = 2;
  double dt = 0.1;
  int horizon = 100;
  double sigma = 1.0;
  double varsigma = 0.1;
  Vector initial_state;     // [0,1,0,1] for two planes
  Matrix initial_variance;  // 0.01 I

  static LinearGaussianModel scenario1();

  Eigen::Index state_dim() const { return 2 * planes; }
  Matrix transition_matrix() const;
  Matrix process_shape() const;  // Q, without sigma^2
  Matrix observation_matrix() const;
  std::vector<int> position_indices() const;
};

// Same linear structure with Student's-t noises scaled to the Gaussian
// variances; the filters receive the Gaussian surrogate.
struct StudentTModel {
  LinearGaussianModel base;
  double nu = 5.0;
  double nu_obs = 5.0;

  static StudentTModel scenario2();

  double sigma_hat() const;    // sqrt(nu / (nu - 2))
  double varsigma_hat() const;
};

// Angle and rotation speed of a point on a spinning disk, observed through
// cos(theta). The prior is a two-term mixture over the direction of rotation.
struct SpinningDiskModel {
  double dt = 0.1;
  int horizon = 100;
  double accel_std = 1.0;
  double obs_std = 0.1;
  double prior_angle_std = 0.1;
  double prior_speed_std = 0.2;
  double prior_speed = 1.0;

  Matrix prior_shape() const;
  std::vector<Vector> prior_means() const;
};

struct Trajectory {
  Vector initial;
  std::vector<Vector> states;
  std::vector<Vector> observations;

  std::size_t length() const { return states.size(); }
  // FNV-1a over the raw bytes of every state and observation.
  std::uint64_t hash() const;
};

// Possibility kernels and matching densities share these objects.
struct ModelKernels {
  GaussianKernel transition;
  GaussianKernel observation;
};

ModelKernels model_kernels(const LinearGaussianModel& model);
ModelKernels model_kernels(const StudentTModel& model);
ModelKernels model_kernels(const SpinningDiskModel& model);

Trajectory simulate(const LinearGaussianModel& model, Rng& rng);
Trajectory simulate(const StudentTModel& model, Rng& rng);
Trajectory simulate(const SpinningDiskModel& model, Rng& rng);

// Standard Student's-t draw as normal / sqrt(chi2 / nu).
double sample_student_t(double nu, Rng& rng);

// Possibilistic prior as a probability over possibility functions, and the
// probabilistic prior of the particle filter with the same parameters.
std::vector<WeightedPossibility> possibility_prior(const LinearGaussianModel& model);
std::vector<WeightedPossibility> possibility_prior(const SpinningDiskModel& model);
std::vector<GaussianTerm> probability_prior(const LinearGaussianModel& model);
std::vector<GaussianTerm> probability_prior(const SpinningDiskModel& model);

}  // namespace possmc
