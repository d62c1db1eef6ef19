#include "possmc/scenarios.hpp"

#include <cmath>
#include <cstring>

#include "possmc/entropy.hpp"

namespace possmc {

Matrix ncv_transition(double dt) {
  Matrix F(2, 2);
  F << 1.0, dt, 0.0, 1.0;
  return F;
}

Matrix ncv_shape(double dt) {
  Matrix Q(2, 2);
  Q << std::pow(dt, 4) / 3.0, std::pow(dt, 3) / 2.0, std::pow(dt, 3) / 2.0, dt * dt;
  return Q;
}

Matrix block_diag(const Matrix& block, int copies) {
  const auto b = block.rows();
  Matrix out = Matrix::Zero(b * copies, b * copies);
  for (int k = 0; k < copies; ++k) out.block(k * b, k * b, b, b) = block;
  return out;
}

LinearGaussianModel LinearGaussianModel::scenario1() {
  LinearGaussianModel m;
  m.initial_state = Vector(4);
  m.initial_state << 0.0, 1.0, 0.0, 1.0;
  m.initial_variance = 0.01 * Matrix::Identity(4, 4);
  return m;
}

Matrix LinearGaussianModel::transition_matrix() const { return block_diag(ncv_transition(dt), planes); }

Matrix LinearGaussianModel::process_shape() const { return block_diag(ncv_shape(dt), planes); }

Matrix LinearGaussianModel::observation_matrix() const {
  Matrix H = Matrix::Zero(planes, state_dim());
  for (int p = 0; p < planes; ++p) H(p, 2 * p) = 1.0;
  return H;
}

std::vector<int> LinearGaussianModel::position_indices() const {
  std::vector<int> idx;
  for (int p = 0; p < planes; ++p) idx.push_back(2 * p);
  return idx;
}

StudentTModel StudentTModel::scenario2() {
  StudentTModel m;
  m.base.planes = 1;
  m.base.initial_state = Vector(2);
  m.base.initial_state << 0.0, 1.0;
  m.base.initial_variance = 0.01 * Matrix::Identity(2, 2);
  return m;
}

double StudentTModel::sigma_hat() const { return std::sqrt(nu / (nu - 2.0)); }
double StudentTModel::varsigma_hat() const { return std::sqrt(nu_obs / (nu_obs - 2.0)); }

Matrix SpinningDiskModel::prior_shape() const {
  Matrix S = Matrix::Zero(2, 2);
  S(0, 0) = prior_angle_std * prior_angle_std;
  S(1, 1) = prior_speed_std * prior_speed_std;
  return S;
}

std::vector<Vector> SpinningDiskModel::prior_means() const {
  Vector a(2), b(2);
  a << 0.0, prior_speed;
  b << 0.0, -prior_speed;
  return {a, b};
}

std::uint64_t Trajectory::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const Vector& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      unsigned char bytes[sizeof(double)];
      const double x = v[k];
      std::memcpy(bytes, &x, sizeof x);
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
      }
    }
  };
  mix(initial);
  for (const auto& s : states) mix(s);
  for (const auto& y : observations) mix(y);
  return h;
}

ModelKernels model_kernels(const LinearGaussianModel& model) {
  const Matrix H = model.observation_matrix();
  return {GaussianKernel::linear(model.transition_matrix(),
                                 model.sigma * model.sigma * model.process_shape()),
          GaussianKernel::linear(H, model.varsigma * model.varsigma *
                                        Matrix::Identity(H.rows(), H.rows()))};
}

ModelKernels model_kernels(const StudentTModel& model) {
  // The scaled noises have exactly the Gaussian variances.
  return model_kernels(model.base);
}

ModelKernels model_kernels(const SpinningDiskModel& model) {
  Matrix R(1, 1);
  R(0, 0) = model.obs_std * model.obs_std;
  auto observe = [](const Vector& x) {
    Vector y(1);
    y[0] = std::cos(x[0]);
    return y;
  };
  const double q = model.accel_std * model.accel_std;
  return {GaussianKernel::linear(ncv_transition(model.dt), q * ncv_shape(model.dt), {0}),
          GaussianKernel::nonlinear(observe, 2, R)};
}

namespace {

Vector standard_normal(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector z(d);
  for (Eigen::Index k = 0; k < d; ++k) z[k] = normal(rng);
  return z;
}

Vector standard_t(Eigen::Index d, double nu, Rng& rng) {
  Vector z(d);
  for (Eigen::Index k = 0; k < d; ++k) z[k] = sample_student_t(nu, rng);
  return z;
}

Vector initial_draw(const LinearGaussianModel& m, Rng& rng) {
  const CholeskyFactor L(m.initial_variance);
  return m.initial_state + L.color(standard_normal(m.state_dim(), rng));
}

}  // namespace

double sample_student_t(double nu, Rng& rng) {
  if (!(nu > 0.0)) throw InvalidArgument("Student's-t degrees of freedom must be > 0");
  std::normal_distribution<double> normal;
  std::chi_squared_distribution<double> chi2(nu);
  const double z = normal(rng);
  return z / std::sqrt(chi2(rng) / nu);
}

Trajectory simulate(const LinearGaussianModel& model, Rng& rng) {
  const Matrix F = model.transition_matrix();
  const Matrix H = model.observation_matrix();
  const CholeskyFactor Lq(model.process_shape());
  Trajectory traj;
  traj.initial = initial_draw(model, rng);
  Vector x = traj.initial;
  for (int t = 0; t < model.horizon; ++t) {
    x = F * x + model.sigma * Lq.color(standard_normal(model.state_dim(), rng));
    Vector y = H * x + model.varsigma * standard_normal(H.rows(), rng);
    traj.states.push_back(x);
    traj.observations.push_back(std::move(y));
  }
  return traj;
}

Trajectory simulate(const StudentTModel& model, Rng& rng) {
  if (!(model.nu > 2.0) || !(model.nu_obs > 2.0)) {
    throw InvalidArgument("Student's-t scenario needs nu > 2 for finite variance");
  }
  const auto& base = model.base;
  const Matrix F = base.transition_matrix();
  const Matrix H = base.observation_matrix();
  const CholeskyFactor Lq(base.process_shape());
  const double process_scale = base.sigma / model.sigma_hat();
  const double obs_scale = base.varsigma / model.varsigma_hat();
  Trajectory traj;
  traj.initial = initial_draw(base, rng);
  Vector x = traj.initial;
  for (int t = 0; t < base.horizon; ++t) {
    x = F * x + process_scale * Lq.color(standard_t(base.state_dim(), model.nu, rng));
    Vector y = H * x + obs_scale * standard_t(H.rows(), model.nu_obs, rng);
    traj.states.push_back(x);
    traj.observations.push_back(std::move(y));
  }
  return traj;
}

Trajectory simulate(const SpinningDiskModel& model, Rng& rng) {
  const Matrix F = ncv_transition(model.dt);
  const CholeskyFactor Lq(ncv_shape(model.dt));
  const CholeskyFactor L0(model.prior_shape());
  const auto means = model.prior_means();
  Trajectory traj;
  const std::size_t k = uniform_open(rng) < 0.5 ? 0 : 1;
  traj.initial = means[k] + L0.color(standard_normal(2, rng));
  traj.initial[0] = wrap_angle(traj.initial[0]);
  Vector x = traj.initial;
  for (int t = 0; t < model.horizon; ++t) {
    x = F * x + model.accel_std * Lq.color(standard_normal(2, rng));
    x[0] = wrap_angle(x[0]);
    Vector y(1);
    y[0] = std::cos(x[0]) + model.obs_std * standard_normal(1, rng)[0];
    traj.states.push_back(x);
    traj.observations.push_back(std::move(y));
  }
  return traj;
}

std::vector<WeightedPossibility> possibility_prior(const LinearGaussianModel& model) {
  return {{1.0, GaussianPossibility(model.initial_state, model.initial_variance)}};
}

std::vector<WeightedPossibility> possibility_prior(const SpinningDiskModel& model) {
  std::vector<WeightedPossibility> out;
  for (const auto& m : model.prior_means()) {
    out.push_back({0.5, GaussianPossibility(m, model.prior_shape())});
  }
  return out;
}

std::vector<GaussianTerm> probability_prior(const LinearGaussianModel& model) {
  return {{1.0, model.initial_state, model.initial_variance}};
}

std::vector<GaussianTerm> probability_prior(const SpinningDiskModel& model) {
  std::vector<GaussianTerm> out;
  for (const auto& m : model.prior_means()) out.push_back({0.5, m, model.prior_shape()});
  return out;
}

}  // namespace possmc
