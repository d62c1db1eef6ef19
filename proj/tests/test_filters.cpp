#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "possmc/gaussian_oracles.hpp"
#include "possmc/multi_filter.hpp"
#include "possmc/particle_filter.hpp"
#include "possmc/single_filter.hpp"

using namespace possmc;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

std::vector<Vector> points(std::initializer_list<double> xs) {
  std::vector<Vector> out;
  for (double x : xs) out.push_back(vec({x}));
  return out;
}

GaussianKernel unit_kernel() { return GaussianKernel::linear(Matrix::Identity(1, 1), scalar(1.0)); }

FilterConfig config(ResamplingMode mode, DiscretePmf pmf = DiscretePmf::Local) {
  FilterConfig cfg;
  cfg.resampling = mode;
  cfg.discrete = pmf;
  return cfg;
}

}  // namespace

TEST_CASE("single prediction weights") {
  const auto g = unit_kernel();
  const SinglePossibilityState one({1.0}, points({0.3}));
  for (auto c : {Complexity::Linear, Complexity::Quadratic}) {
    const auto p = single_predict_at(one, points({1.7}), g, c);
    CHECK(p.weight(0) == 1.0);
  }

  const SinglePossibilityState s({1.0, 0.5}, points({0.0, 1.0}));
  const auto lin = single_predict_at(s, points({0.0, 1.0}), g, Complexity::Linear);
  CHECK(lin.weight(0) == doctest::Approx(1.0));
  CHECK(lin.weight(1) == doctest::Approx(0.5));
  const auto quad = single_predict_at(s, points({0.0, 1.0}), g, Complexity::Quadratic);
  CHECK(quad.weight(0) == doctest::Approx(std::max(1.0, 0.5 * std::exp(-0.5))));
  CHECK(quad.weight(1) == doctest::Approx(std::max(std::exp(-0.5), 0.5)).epsilon(1e-12));
}

TEST_CASE("quadratic prediction matches a direct double loop") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> n01;
  Matrix f(2, 2);
  f << 1.0, 0.1, 0.0, 1.0;
  Matrix q(2, 2);
  q << 0.05, 0.01, 0.01, 0.08;
  const auto k = GaussianKernel::linear(f, q);
  const auto k_angular = GaussianKernel::linear(f, q, {0});
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vector> prev;
    std::vector<Vector> pred;
    std::vector<double> w;
    for (int i = 0; i < 300; ++i) {
      prev.push_back(vec({n01(gen), n01(gen)}));
      pred.push_back(vec({n01(gen), n01(gen)}));
      w.push_back(std::exp(-std::abs(n01(gen))));
    }
    for (const auto* kernel : {&k, &k_angular}) {
      const auto got = predicted_weights(prev, w, pred, *kernel, Complexity::Quadratic);
      std::vector<double> direct(pred.size(), 0.0);
      for (std::size_t i = 0; i < pred.size(); ++i) {
        for (std::size_t j = 0; j < prev.size(); ++j) {
          Vector d = pred[i] - f * prev[j];
          if (kernel == &k_angular) d[0] = std::remainder(d[0], 2.0 * std::numbers::pi);
          const double v = w[j] * std::exp(-0.5 * d.dot(q.inverse() * d));
          direct[i] = std::max(direct[i], v < 1e-300 ? 0.0 : v);
        }
      }
      for (std::size_t i = 0; i < pred.size(); ++i) {
        CHECK(got[i] == doctest::Approx(direct[i]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("one-dimensional quadratic prediction matches a direct double loop") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> coin(0, 9);
  for (const double scale : {1e-6, 0.3, 5.0}) {
    const auto k = GaussianKernel::linear(Matrix::Constant(1, 1, 0.9), Matrix::Constant(1, 1, scale * scale));
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Vector> prev;
      std::vector<Vector> pred;
      std::vector<double> w;
      for (int i = 0; i < 400; ++i) {
        // Repeated points and zero weights exercise equal slopes and skipped lines.
        prev.push_back(vec({coin(gen) == 0 && i > 0 ? prev.back()[0] : 3.0 * n01(gen)}));
        pred.push_back(vec({3.0 * n01(gen)}));
        w.push_back(coin(gen) == 0 ? 0.0 : std::exp(-std::abs(n01(gen))));
      }
      const auto got = predicted_weights(prev, w, pred, k, Complexity::Quadratic);
      for (std::size_t i = 0; i < pred.size(); ++i) {
        double direct = 0.0;
        for (std::size_t j = 0; j < prev.size(); ++j) {
          const double d = (pred[i][0] - 0.9 * prev[j][0]) / scale;
          const double v = w[j] * std::exp(-0.5 * d * d);
          direct = std::max(direct, v < 1e-300 ? 0.0 : v);
        }
        CHECK(got[i] == doctest::Approx(direct).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("single update") {
  const auto s = unit_kernel();
  const SinglePossibilityState pred({1.0, std::exp(-0.5)}, points({0.0, 1.0}));
  const auto up = single_update(pred, s, vec({1.0}));
  CHECK(up.weight(0) == doctest::Approx(1.0));
  CHECK(up.weight(1) == doctest::Approx(1.0));
  CHECK(up.point(1)[0] == 1.0);

  const auto flat = GaussianKernel::nonlinear([](const Vector&) { return vec({2.0}); }, 1, scalar(1.0));
  const SinglePossibilityState p({0.3, 1.0, 0.6}, points({-1.0, 0.0, 4.0}));
  const auto same = single_update(p, flat, vec({2.5}));
  for (std::size_t i = 0; i < 3; ++i) CHECK(same.weight(i) == doctest::Approx(p.weight(i)));

  const SinglePossibilityState q({1.0, 0.8}, points({3.0, 5.0}));
  CHECK(single_update(q, s, vec({3.0})).weight(0) == 1.0);

  const auto sharp = GaussianKernel::linear(Matrix::Identity(1, 1), scalar(1e-6));
  CHECK_THROWS_AS(single_update(q, sharp, vec({100.0})), DegenerateWeights);
}

TEST_CASE("selective resampling keeps uncapped samples") {
  Rng rng(1);
  const SinglePossibilityState s({1.0, 0.2, 0.2}, points({0.0, 1.0, 2.0}));
  const auto cfg = config(ResamplingMode::Selective);
  std::map<std::size_t, int> counts;
  for (int rep = 0; rep < 20000; ++rep) {
    const auto a = resample_ancestors(s.weights(), 3, cfg, rng);
    REQUIRE(a.size() == 3);
    CHECK(a[0] == 0);
    CHECK(a[1] != 0);
    CHECK(a[2] != 0);
    ++counts[a[1]];
    ++counts[a[2]];
  }
  CHECK(counts.size() == 2);
  CHECK(std::abs(counts[1] / 40000.0 - 0.5) < 0.01);

  const auto r = resample_single(s, cfg, rng);
  CHECK(r.point(0)[0] == 0.0);
  CHECK(r.weight(0) == 1.0);
  CHECK(r.size() == 3);

  const SinglePossibilityState one({1.0}, points({7.0}));
  for (auto mode : {ResamplingMode::All, ResamplingMode::Selective}) {
    const auto o = resample_single(one, config(mode), rng);
    CHECK(o.size() == 1);
    CHECK(o.point(0)[0] == 7.0);
    CHECK(o.weight(0) == 1.0);
  }
}

TEST_CASE("resampling equal weights") {
  Rng rng(4);
  const std::vector<double> w(4, 1.0);
  std::vector<int> counts(4, 0);
  const int reps = 50000;
  for (int rep = 0; rep < reps; ++rep) {
    for (auto a : resample_ancestors(w, 4, config(ResamplingMode::All), rng)) ++counts[a];
  }
  for (int c : counts) CHECK(std::abs(c / (4.0 * reps) - 0.25) < 0.005);
  const SinglePossibilityState s(w, points({0.0, 1.0, 2.0, 3.0}));
  for (auto mode : {ResamplingMode::All, ResamplingMode::Selective}) {
    const auto r = resample_single(s, config(mode), rng);
    for (double v : r.weights()) CHECK(v == 1.0);
  }
}

TEST_CASE("resampling with global pmf uses the subset-bounded law") {
  Rng rng(8);
  const std::vector<double> w{0.1, 0.5, 1.0};
  std::vector<int> counts(3, 0);
  const int reps = 300000;
  for (int rep = 0; rep < reps; ++rep) {
    ++counts[resample_ancestors(w, 1, config(ResamplingMode::All, DiscretePmf::Global), rng)[0]];
  }
  CHECK(std::abs(counts[0] / double(reps) - 0.1) < 0.003);
  CHECK(std::abs(counts[1] / double(reps) - 0.4) < 0.003);
}

TEST_CASE("map of single state") {
  CHECK(map_single(SinglePossibilityState({0.3, 1.0, 0.7}, points({5.0, 6.0, 7.0})))[0] == 6.0);
  CHECK(map_single(SinglePossibilityState({1.0, 1.0}, points({5.0, 6.0})))[0] == 5.0);
  CHECK(map_single(SinglePossibilityState({1.0}, points({2.0})))[0] == 2.0);
}

TEST_CASE("single filter initialisation") {
  Rng rng(9);
  FilterConfig cfg;
  cfg.samples = 500;
  const GaussianPossibility prior(vec({1.0, 2.0}), Matrix::Identity(2, 2));
  const auto s = initialize_single(prior, cfg, rng);
  CHECK(s.size() == 500);
  CHECK(s.is_normalized());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.weight(i) == doctest::Approx(prior(s.point(i)) / prior(s.point(s.argmax()))));
  }
}

TEST_CASE("approximate_opm") {
  Rng rng(10);
  FilterConfig cfg;
  const std::vector<WeightedPossibility> g = {{1.0, GaussianPossibility(vec({0.0}), scalar(1.0))}};
  const auto l = approximate_opm(g, 3, rng, cfg);
  REQUIRE(l.group_count() == 1);
  CHECK(l.group(0).weight == 1.0);
  CHECK(l.group(0).samples.size() == 3);
  double top = 0.0;
  for (const auto& x : l.group(0).samples.points()) top = std::max(top, std::exp(-0.5 * x[0] * x[0]));
  for (std::size_t j = 0; j < 3; ++j) {
    const double x = l.group(0).samples.point(j)[0];
    CHECK(l.group(0).samples.weight(j) == doctest::Approx(std::exp(-0.5 * x * x) / top));
  }
  CHECK(evaluate_opm(l, [](const Vector&) { return 1.0; }) == doctest::Approx(1.0));

  const std::vector<WeightedPossibility> pts = {{0.5, PointIndicator(vec({-3.0}))},
                                                {0.5, PointIndicator(vec({3.0}))}};
  for (int rep = 0; rep < 50; ++rep) {
    const auto m = approximate_opm(pts, 4, rng, cfg);
    double total = 0.0;
    for (const auto& grp : m.groups()) {
      const double expected = static_cast<double>(grp.samples.size()) / 4.0;
      CHECK(grp.weight == doctest::Approx(expected));
      for (std::size_t j = 0; j < grp.samples.size(); ++j) {
        CHECK(grp.samples.weight(j) == 1.0);
        CHECK(grp.samples.point(j)[0] == grp.samples.point(0)[0]);
      }
      total += grp.weight;
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(m.total_samples() == 4);
    CHECK(evaluate_opm(m, [](const Vector&) { return 1.0; }) == doctest::Approx(1.0));
  }
  CHECK_THROWS(approximate_opm({}, 4, rng, cfg));
}

TEST_CASE("multi prediction") {
  const auto g = unit_kernel();
  const MultiPossibilityState two({{0.5, WeightedSampleSet({1.0}, points({0.0}))},
                                   {0.5, WeightedSampleSet({1.0}, points({10.0}))}});
  const auto p = multi_predict_at(two, {points({0.0}), points({10.0})}, g, Complexity::Quadratic);
  CHECK(p.group(0).weight == doctest::Approx(0.5));
  CHECK(p.group(1).weight == doctest::Approx(0.5));

  const MultiPossibilityState uneven({{0.8, WeightedSampleSet({1.0, 0.4}, points({0.0, 1.0}))},
                                      {0.2, WeightedSampleSet({1.0, 0.4}, points({0.0, 1.0}))}});
  const auto u = multi_predict_at(uneven, {points({0.5, 1.5}), points({0.5, 1.5})}, g,
                                  Complexity::Quadratic);
  CHECK(u.group(0).weight == doctest::Approx(0.8));
  CHECK(u.group(1).weight == doctest::Approx(0.2));

  const MultiPossibilityState single({{1.0, WeightedSampleSet({1.0, 0.5}, points({0.0, 1.0}))}});
  const auto sp = multi_predict_at(single, {points({0.0, 1.0})}, g, Complexity::Quadratic);
  CHECK(sp.group(0).weight == 1.0);
  const auto ref = single_predict_at(single.group(0).samples, points({0.0, 1.0}), g,
                                     Complexity::Quadratic);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(sp.group(0).samples.weight(j) == doctest::Approx(ref.weight(j)));
  }

  // Group weight follows the largest unnormalized predicted value.
  const MultiPossibilityState far({{0.5, WeightedSampleSet({1.0}, points({0.0}))},
                                   {0.5, WeightedSampleSet({1.0}, points({0.0}))}});
  const auto fp = multi_predict_at(far, {points({0.0}), points({1.0})}, g, Complexity::Quadratic);
  const double a = 0.5 * 1.0;
  const double b = 0.5 * std::exp(-0.5);
  CHECK(fp.group(0).weight == doctest::Approx(a / (a + b)));
}

TEST_CASE("multi update") {
  Rng rng(12);
  const auto s = unit_kernel();
  const MultiPossibilityState st({{0.6, WeightedSampleSet({1.0, 0.5}, points({0.0, 1.0}))},
                                  {0.4, WeightedSampleSet({1.0}, points({3.0}))}});
  const Vector y = vec({1.0});
  const auto up = multi_update(st, single_likelihood(s), y, rng);
  REQUIRE(up.group_count() == 2);
  const auto g0 = single_update(st.group(0).samples, s, y);
  const auto g1 = single_update(st.group(1).samples, s, y);
  for (std::size_t j = 0; j < 2; ++j) CHECK(up.group(0).samples.weight(j) == doctest::Approx(g0.weight(j)));
  CHECK(up.group(1).samples.weight(0) == doctest::Approx(g1.weight(0)));
  const double n0 = 0.6 * std::max(1.0 * std::exp(-0.5), 0.5 * 1.0);
  const double n1 = 0.4 * std::exp(-0.5 * 4.0);
  CHECK(up.group(0).weight == doctest::Approx(n0 / (n0 + n1)));

  const auto other = GaussianKernel::linear(Matrix::Identity(1, 1), scalar(4.0));
  const auto masked = multi_update(st, FiniteLikelihood{{{1.0, s}, {0.0, other}}}, y, rng);
  REQUIRE(masked.group_count() == 2);
  CHECK(masked.group(0).weight == doctest::Approx(up.group(0).weight));

  const MultiPossibilityState m1({{1.0, WeightedSampleSet({1.0}, points({0.0}))}});
  const auto flat = GaussianKernel::nonlinear([](const Vector&) { return vec({1.0}); }, 1, scalar(1.0));
  const auto two = multi_update(m1, FiniteLikelihood{{{0.5, flat}, {0.5, s}}}, y, rng);
  REQUIRE(two.group_count() == 2);
  const double a = 0.5;
  const double b = 0.5 * std::exp(-0.5);
  CHECK(two.group(0).weight == doctest::Approx(a / (a + b)));
  CHECK(two.group(0).weight == doctest::Approx(0.6225).epsilon(1e-4));
  CHECK(two.group(1).weight == doctest::Approx(0.3775).epsilon(1e-4));
  CHECK(two.group(0).samples.shared_points() == two.group(1).samples.shared_points());
}

TEST_CASE("multi resampling") {
  Rng rng(13);
  const MultiPossibilityState single({{1.0, WeightedSampleSet({1.0, 0.2, 0.2}, points({0.0, 1.0, 2.0}))}});
  const auto r = multi_resample(single, 3, FilterConfig{}, rng);
  REQUIRE(r.group_count() == 1);
  CHECK(r.group(0).weight == 1.0);
  CHECK(r.group(0).samples.point(0)[0] == 0.0);

  const MultiPossibilityState dead({{1.0, WeightedSampleSet({1.0}, points({0.0}))},
                                    {0.0, WeightedSampleSet({1.0}, points({5.0}))}});
  for (int rep = 0; rep < 20; ++rep) {
    const auto d = multi_resample(dead, 10, FilterConfig{}, rng);
    CHECK(d.group_count() == 1);
    CHECK(d.group(0).samples.point(0)[0] == 0.0);
  }

  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<SampleGroup> groups;
    double total = 0.0;
    const int m = 1 + rep % 4;
    for (int i = 0; i < m; ++i) {
      std::vector<double> w;
      std::vector<Vector> p;
      for (int j = 0; j < 1 + (rep + i) % 7; ++j) {
        w.push_back(u(rng));
        p.push_back(vec({u(rng)}));
      }
      w[0] = 1.0;
      groups.push_back({u(rng), WeightedSampleSet(w, p)});
      total += groups.back().weight;
    }
    for (auto& g : groups) g.weight /= total;
    const std::size_t budget = 5 + rep;
    for (auto mode : {ResamplingMode::All, ResamplingMode::Selective}) {
      const auto out = multi_resample(MultiPossibilityState(groups), budget, config(mode), rng);
      CHECK(out.total_samples() == budget);
      CHECK(out.is_valid(1e-9));
    }
  }
}

TEST_CASE("map of multi state") {
  const MultiPossibilityState one({{1.0, WeightedSampleSet({0.3, 1.0}, points({1.0, 2.0}))}});
  CHECK(map_multi(one)[0] == 2.0);
  const MultiPossibilityState dom({{0.9, WeightedSampleSet({1.0, 1.0}, points({1.0, 2.0}))},
                                   {0.1, WeightedSampleSet({1.0}, points({3.0}))}});
  CHECK(map_multi(dom)[0] == 1.0);
  const MultiPossibilityState tie({{0.5, WeightedSampleSet({0.2, 1.0}, points({1.0, 2.0}))},
                                   {0.5, WeightedSampleSet({0.4}, points({3.0}))}});
  CHECK(map_multi(tie)[0] == 2.0);
}

TEST_CASE("particle filter step") {
  Rng rng(14);
  const auto shift = GaussianKernel::nonlinear([](const Vector& x) { return vec({x[0] + 1.0}); }, 1,
                                               scalar(1e-20));
  const auto flat = GaussianKernel::nonlinear([](const Vector&) { return vec({0.0}); }, 1, scalar(1.0));
  ParticleState st{points({0.0, 1.0, 2.0}), {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  const ParticleModel model{shift, flat};
  const auto step = particle_filter_step(st, model, vec({0.3}), rng);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(step.weighted.particles[i][0] == doctest::Approx(st.particles[i][0] + 1.0));
    CHECK(step.weighted.weights[i] == doctest::Approx(1.0 / 3));
  }
  double sum = 0.0;
  for (double w : step.resampled.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0));

  const auto walk = unit_kernel();
  const ParticleModel rw{walk, walk};
  ParticleState single{points({0.0}), {1.0}};
  for (int t = 0; t < 5; ++t) {
    const auto s1 = particle_filter_step(single, rw, vec({0.0}), rng);
    CHECK(s1.weighted.weights[0] == 1.0);
    single = s1.resampled;
  }

  ParticleState many{points({-1.0, 0.0, 0.5, 2.0}), {0.1, 0.2, 0.3, 0.4}};
  const auto sm = particle_filter_step(many, rw, vec({0.7}), rng, ResamplingScheme::Systematic);
  double total = 0.0;
  for (double w : sm.weighted.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resampling schemes") {
  Rng rng(15);
  const std::vector<double> w{0.1, 0.6, 0.3};
  const auto sys = systematic_resample(w, 10, rng);
  std::vector<int> c(3, 0);
  for (auto a : sys) ++c[a];
  CHECK(c[0] >= 0);
  CHECK(c[0] <= 2);
  CHECK(c[1] >= 5);
  CHECK(c[1] <= 7);
  std::vector<int> m(3, 0);
  for (int rep = 0; rep < 100000; ++rep) ++m[multinomial_resample(w, 1, rng)[0]];
  CHECK(std::abs(m[1] / 100000.0 - 0.6) < 0.006);
}

TEST_CASE("particle MAP against a direct evaluation") {
  Matrix fm = scalar(0.9);
  const auto trans = GaussianKernel::linear(fm, scalar(0.5));
  const auto obs = GaussianKernel::linear(Matrix::Identity(1, 1), scalar(0.3));
  const ParticleModel model{trans, obs};
  const ParticleState prev{points({-1.0, 0.2, 1.4}), {0.5, 0.3, 0.2}};
  const ParticleState upd{points({-0.6, 0.4, 1.1}), {0.2, 0.5, 0.3}};
  const Vector y = vec({0.8});

  auto gauss = [](double x, double m, double v) {
    return std::exp(-0.5 * (x - m) * (x - m) / v) / std::sqrt(2.0 * std::numbers::pi * v);
  };
  int best = -1;
  double best_v = -1.0;
  for (int i = 0; i < 3; ++i) {
    double prior = 0.0;
    for (int j = 0; j < 3; ++j) prior += prev.weights[j] * gauss(upd.particles[i][0], 0.9 * prev.particles[j][0], 0.5);
    const double v = gauss(0.8, upd.particles[i][0], 0.3) * prior;
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  CHECK(particle_map(prev, upd, model, y, Complexity::Quadratic)[0] == upd.particles[best][0]);
  CHECK(particle_map(prev, upd, model, y, Complexity::Linear)[0] == 0.4);

  const ParticleState lone{points({2.0}), {1.0}};
  CHECK(particle_map(lone, lone, model, y, Complexity::Quadratic)[0] == 2.0);
  const ParticleState same{points({1.0, 1.0, 1.0}), {0.2, 0.3, 0.5}};
  CHECK(particle_map(same, same, model, y, Complexity::Quadratic)[0] == 1.0);
}

TEST_CASE("kalman step") {
  const GaussianBelief prior{vec({0.0}), scalar(1.0)};
  const Matrix one = scalar(1.0);
  const auto k = kalman_step(prior, one, scalar(0.0), one, one, vec({1.0}));
  CHECK(k.mean[0] == doctest::Approx(0.5));
  CHECK(k.cov(0, 0) == doctest::Approx(0.5));
  const auto g = gaussian_possibility_step(prior, one, scalar(0.0), one, one, vec({1.0}));
  CHECK(g.mean[0] == doctest::Approx(0.5));
  CHECK(g.cov(0, 0) == doctest::Approx(0.5));

  Matrix f(2, 2);
  f << 1.0, 0.5, 0.0, 1.0;
  Matrix h(1, 2);
  h << 1.0, 0.0;
  const GaussianBelief b{vec({1.0, 2.0}), Matrix::Identity(2, 2)};
  const Vector hm = h * f * b.mean;
  const auto z = kalman_step(b, f, 0.1 * Matrix::Identity(2, 2), h, scalar(0.5), hm);
  CHECK((z.mean - f * b.mean).norm() < 1e-12);

  const auto wide = kalman_step(b, f, 0.1 * Matrix::Identity(2, 2), h, scalar(1e12), vec({50.0}));
  const Matrix pp = f * b.cov * f.transpose() + 0.1 * Matrix::Identity(2, 2);
  CHECK((wide.mean - f * b.mean).norm() < 1e-6);
  CHECK((wide.cov - pp).norm() < 1e-6);

  const auto pure = gaussian_possibility_step(b, f, Matrix::Zero(2, 2), h, scalar(1e14), vec({3.0}));
  CHECK((pure.mean - f * b.mean).norm() < 1e-6);
}
