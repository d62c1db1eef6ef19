#include "possmc/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "possmc/angles.hpp"
#include "possmc/opm.hpp"

namespace possmc {

namespace {

constexpr double kMaxExponent = 690.7755278982137;

// sum_j w_j exp(-|a_i - b_j|^2 / 2) for every a_i, skipping terms below the
// flush threshold (sorted on the first whitened coordinate).
std::vector<double> gaussian_sums(const std::vector<Vector>& targets, const std::vector<Vector>& centers,
                                  std::span<const double> weights) {
  const std::size_t n = centers.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return centers[a][0] < centers[b][0]; });
  std::vector<double> keys(n);
  for (std::size_t k = 0; k < n; ++k) keys[k] = centers[order[k]][0];

  std::vector<double> sums(targets.size(), 0.0);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Vector& a = targets[i];
    const auto start = static_cast<std::ptrdiff_t>(
        std::lower_bound(keys.begin(), keys.end(), a[0]) - keys.begin());
    double s = 0.0;
    auto add = [&](std::ptrdiff_t k) {
      const std::size_t j = order[static_cast<std::size_t>(k)];
      s += weights[j] * clamped_exp(-0.5 * (a - centers[j]).squaredNorm());
    };
    for (std::ptrdiff_t k = start; k < static_cast<std::ptrdiff_t>(n); ++k) {
      const double gap = keys[static_cast<std::size_t>(k)] - a[0];
      if (0.5 * gap * gap > kMaxExponent) break;
      add(k);
    }
    for (std::ptrdiff_t k = start - 1; k >= 0; --k) {
      const double gap = a[0] - keys[static_cast<std::size_t>(k)];
      if (0.5 * gap * gap > kMaxExponent) break;
      add(k);
    }
    sums[i] = s;
  }
  return sums;
}

}  // namespace

ParticleState initialize_particles(const std::vector<GaussianTerm>& prior, std::size_t count,
                                   Rng& rng, const GaussianKernel* wrap_like) {
  if (prior.empty()) throw InvalidArgument("initialize_particles: empty prior");
  if (count < 1) throw InvalidArgument("initialize_particles: count must be >= 1");
  std::vector<double> p;
  std::vector<CholeskyFactor> factors;
  for (const auto& term : prior) {
    p.push_back(term.weight);
    factors.emplace_back(term.covariance);
  }
  const PmfSampler select(p);
  ParticleState s;
  s.particles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = prior.size() == 1 ? 0 : select(rng);
    Vector x = sample_gaussian(prior[k].mean, factors[k], rng);
    if (wrap_like) x = wrap_like->wrap(std::move(x));
    s.particles.push_back(std::move(x));
  }
  s.weights.assign(count, 1.0 / static_cast<double>(count));
  return s;
}

std::vector<std::size_t> multinomial_resample(std::span<const double> weights, std::size_t count,
                                              Rng& rng) {
  const PmfSampler draw(weights);
  std::vector<std::size_t> out(count);
  for (auto& a : out) a = draw(rng);
  return out;
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t count,
                                             Rng& rng) {
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  const double total = cumulative.back();
  if (!(total > 0.0)) throw DegenerateWeights("systematic_resample: zero total weight");
  const double step = total / static_cast<double>(count);
  double u = uniform_open(rng) * step;
  std::vector<std::size_t> out(count);
  std::size_t j = 0;
  for (std::size_t k = 0; k < count; ++k) {
    while (j + 1 < cumulative.size() && cumulative[j] < u) ++j;
    out[k] = j;
    u += step;
  }
  return out;
}

ParticleStep particle_filter_step(const ParticleState& state, const ParticleModel& model,
                                  const Vector& y, Rng& rng, ResamplingScheme scheme) {
  const std::size_t n = state.size();
  if (n == 0 || state.weights.size() != n) throw InvalidArgument("particle_filter_step: bad state");

  ParticleStep step;
  step.previous = state;
  step.weighted.particles.reserve(n);
  for (const auto& x : state.particles) {
    step.weighted.particles.push_back(
        draw_from_kernel(model.transition, x, ContinuousSampler::Scaled, rng));
  }
  // Log-domain weights keep the normalization stable for sharp likelihoods.
  std::vector<double> logw(n);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    logw[i] = model.observation.log_density(y, step.weighted.particles[i]);
    top = std::max(top, logw[i]);
  }
  if (!std::isfinite(top)) throw DegenerateWeights("particle weights all vanished");
  step.weighted.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) step.weighted.weights[i] = std::exp(logw[i] - top);
  normalize_to_sum(step.weighted.weights);

  const auto ancestors = scheme == ResamplingScheme::Multinomial
                             ? multinomial_resample(step.weighted.weights, n, rng)
                             : systematic_resample(step.weighted.weights, n, rng);
  step.resampled.particles.reserve(n);
  for (std::size_t a : ancestors) step.resampled.particles.push_back(step.weighted.particles[a]);
  step.resampled.weights.assign(n, 1.0 / static_cast<double>(n));
  return step;
}

Vector particle_map(const ParticleState& previous, const ParticleState& updated,
                    const ParticleModel& model, const Vector& y, Complexity complexity) {
  const std::size_t n = updated.size();
  if (n == 0) throw InvalidArgument("particle_map: no particles");
  if (complexity == Complexity::Linear) {
    const auto it = std::max_element(updated.weights.begin(), updated.weights.end());
    return updated.particles[static_cast<std::size_t>(it - updated.weights.begin())];
  }

  const auto& transition = model.transition;
  std::vector<double> mixture(n, 0.0);
  if (transition.is_linear_euclidean()) {
    std::vector<Vector> centers;
    centers.reserve(previous.size());
    for (const auto& x : previous.particles) {
      centers.push_back(transition.factor().whiten(transition.mean(x)));
    }
    std::vector<Vector> targets;
    targets.reserve(n);
    for (const auto& x : updated.particles) targets.push_back(transition.factor().whiten(x));
    mixture = gaussian_sums(targets, centers, previous.weights);
  } else {
    std::vector<Vector> means;
    means.reserve(previous.size());
    for (const auto& x : previous.particles) means.push_back(transition.mean(x));
    const auto lower = transition.factor().lower().triangularView<Eigen::Lower>();
    Vector d(transition.output_dim());
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < means.size(); ++j) {
        d.noalias() = updated.particles[i] - means[j];
        for (int a : transition.angular()) d[a] = wrap_angle_unchecked(d[a]);
        lower.solveInPlace(d);
        s += previous.weights[j] * clamped_exp(-0.5 * d.squaredNorm());
      }
      mixture[i] = s;
    }
  }

  // The transition normalizer is common to every candidate and dropped.
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = mixture[i] > 0.0
                         ? std::log(mixture[i]) + model.observation.log_density(y, updated.particles[i])
                         : -std::numeric_limits<double>::infinity();
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  return updated.particles[arg];
}

}  // namespace possmc
