#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "possmc/scenarios.hpp"

using namespace possmc;

TEST_CASE("ncv matrices") {
  const double dt = 0.1;
  const Matrix f = ncv_transition(dt);
  CHECK(f(0, 0) == 1.0);
  CHECK(f(0, 1) == dt);
  CHECK(f(1, 0) == 0.0);
  CHECK(f(1, 1) == 1.0);
  const Matrix q = ncv_shape(dt);
  CHECK(q(0, 0) == doctest::Approx(std::pow(dt, 4) / 3.0));
  CHECK(q(0, 1) == doctest::Approx(std::pow(dt, 3) / 2.0));
  CHECK(q(1, 0) == doctest::Approx(std::pow(dt, 3) / 2.0));
  CHECK(q(1, 1) == doctest::Approx(dt * dt));
  const Matrix b = block_diag(q, 2);
  CHECK(b.rows() == 4);
  CHECK(b.block(2, 2, 2, 2) == q);
  CHECK(b.block(0, 2, 2, 2).isZero());
}

TEST_CASE("scenario 1 defaults") {
  const auto m = LinearGaussianModel::scenario1();
  CHECK(m.state_dim() == 4);
  CHECK(m.horizon == 100);
  CHECK(m.dt == doctest::Approx(0.1));
  CHECK(m.initial_state.isApprox(Vector::Map(std::vector<double>{0, 1, 0, 1}.data(), 4)));
  CHECK(m.initial_variance.isApprox(0.01 * Matrix::Identity(4, 4)));
  const auto pos = m.position_indices();
  CHECK(pos == std::vector<int>{0, 2});
  const Matrix h = m.observation_matrix();
  CHECK(h.rows() == 2);
  CHECK(h(0, 0) == 1.0);
  CHECK(h(1, 2) == 1.0);
  CHECK(h.sum() == 2.0);
}

TEST_CASE("noise-free linear trajectory is deterministic") {
  auto m = LinearGaussianModel::scenario1();
  m.sigma = 0.0;
  m.varsigma = 0.0;
  m.horizon = 20;
  Rng rng(1);
  const auto traj = simulate(m, rng);
  const Matrix f = m.transition_matrix();
  const Matrix h = m.observation_matrix();
  Vector x = traj.initial;
  for (int t = 0; t < m.horizon; ++t) {
    x = f * x;
    CHECK((traj.states[t] - x).norm() < 1e-12);
    CHECK((traj.observations[t] - h * x).norm() < 1e-12);
  }
}

TEST_CASE("simulation is reproducible from the seed") {
  const auto m = LinearGaussianModel::scenario1();
  Rng a(99);
  Rng b(99);
  Rng c(100);
  const auto ta = simulate(m, a);
  CHECK(ta.hash() == simulate(m, b).hash());
  CHECK(ta.hash() != simulate(m, c).hash());
  CHECK(ta.length() == 100);
}

TEST_CASE("student t draws") {
  Rng rng(3);
  const int n = 1000000;
  const double nu = 5.0;
  std::vector<double> xs(n);
  double m2 = 0.0;
  double m4 = 0.0;
  for (auto& x : xs) {
    x = sample_student_t(nu, rng);
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m2 /= n;
  m4 /= n;
  CHECK(m2 == doctest::Approx(nu / (nu - 2.0)).epsilon(0.02));
  CHECK(m4 / (m2 * m2) - 3.0 > 0.0);
  std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
  CHECK(std::abs(xs[n / 2]) < 0.005);

  const auto st = StudentTModel::scenario2();
  CHECK(st.sigma_hat() == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const double scale = st.base.sigma / st.sigma_hat();
  double var = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = scale * sample_student_t(st.nu, rng);
    var += u * u;
  }
  CHECK(var / n == doctest::Approx(st.base.sigma * st.base.sigma).epsilon(0.02));
}

TEST_CASE("scenario 2 surrogate kernels match the noise variance") {
  const auto st = StudentTModel::scenario2();
  const auto k = model_kernels(st);
  const Matrix q = st.base.sigma * st.base.sigma * st.base.process_shape();
  CHECK(k.transition.shape().isApprox(q));
  const Matrix r = st.base.varsigma * st.base.varsigma *
                   Matrix::Identity(st.base.observation_matrix().rows(), st.base.observation_matrix().rows());
  CHECK(k.observation.shape().isApprox(r));

  // Empirical one-step process covariance of the heavy-tailed simulation.
  auto m = st;
  m.base.horizon = 1;
  m.base.varsigma = 1.0;
  const Matrix f = m.base.transition_matrix();
  Matrix acc = Matrix::Zero(2, 2);
  Rng rng(5);
  const int n = 300000;
  for (int i = 0; i < n; ++i) {
    const auto traj = simulate(m, rng);
    const Vector e = traj.states[0] - f * traj.initial;
    acc += e * e.transpose();
  }
  acc /= n;
  CHECK(((acc - q).array().abs() / q.array().abs().maxCoeff()).maxCoeff() < 0.03);
}

TEST_CASE("scenario 1 kernels") {
  const auto m = LinearGaussianModel::scenario1();
  const auto k = model_kernels(m);
  const Vector x = m.initial_state;
  const Vector mean = k.transition.mean(x);
  CHECK(k.transition.possibility(mean, x) == 1.0);
  const Matrix q = m.sigma * m.sigma * m.process_shape();
  const double norm = 1.0 / std::sqrt(std::pow(2.0 * std::numbers::pi, 4) * q.determinant());
  CHECK(k.transition.density(mean, x) == doctest::Approx(norm).epsilon(1e-10));
}

TEST_CASE("spinning disk") {
  SpinningDiskModel m;
  m.prior_speed = 0.0;
  m.prior_speed_std = 1e-12;
  m.accel_std = 0.0;
  m.obs_std = 0.0;
  m.horizon = 30;
  Rng rng(6);
  const auto traj = simulate(m, rng);
  for (int t = 0; t < m.horizon; ++t) {
    CHECK(traj.states[t][0] == doctest::Approx(traj.initial[0]).epsilon(1e-9));
    CHECK(traj.observations[t][0] == doctest::Approx(std::cos(traj.states[t][0])));
  }

  const SpinningDiskModel d;
  const auto k = model_kernels(d);
  Vector state(2);
  state << 2.5, -1.0;
  Vector y(1);
  y << std::cos(2.5);
  CHECK(k.observation.possibility(y, state) == 1.0);
  CHECK(k.observation.shape()(0, 0) == doctest::Approx(d.obs_std * d.obs_std));

  Rng r2(7);
  const auto traj2 = simulate(d, r2);
  for (const auto& s : traj2.states) {
    CHECK(s[0] > -std::numbers::pi);
    CHECK(s[0] <= std::numbers::pi);
  }
  const auto prior = possibility_prior(d);
  REQUIRE(prior.size() == 2);
  CHECK(prior[0].weight == 0.5);
}
