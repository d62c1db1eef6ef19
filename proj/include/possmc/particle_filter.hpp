#pragma once

#include <vector>

#include "possmc/filter_config.hpp"

namespace possmc {

// Particles with probability weights summing to 1.
struct ParticleState {
  std::vector<Vector> particles;
  std::vector<double> weights;

  std::size_t size() const { return particles.size(); }
};

enum class ResamplingScheme { Multinomial, Systematic };

// Transition density sampler/evaluator and observation density evaluator.
struct ParticleModel {
  const GaussianKernel& transition;
  const GaussianKernel& observation;
};

struct ParticleStep {
  ParticleState previous;   // before prediction
  ParticleState weighted;   // after update, before resampling
  ParticleState resampled;  // input of the next step
};

// Draws N particles from a mixture of Gaussian densities given as
// (weight, mean, covariance) terms; weights uniform.
struct GaussianTerm {
  double weight = 1.0;
  Vector mean;
  Matrix covariance;
};
ParticleState initialize_particles(const std::vector<GaussianTerm>& prior, std::size_t count,
                                   Rng& rng, const GaussianKernel* wrap_like = nullptr);

// Bootstrap step: propagate, weight by the likelihood, normalize, resample.
ParticleStep particle_filter_step(const ParticleState& state, const ParticleModel& model,
                                  const Vector& y, Rng& rng,
                                  ResamplingScheme scheme = ResamplingScheme::Multinomial);

// Quadratic: argmax_i p(y | x_i) sum_j p(x_i | x'_j) w'_j over the updated
// particles x_i and the pre-prediction set (x'_j, w'_j). Linear: the
// highest-weight updated particle. Lowest index on ties.
Vector particle_map(const ParticleState& previous, const ParticleState& updated,
                    const ParticleModel& model, const Vector& y, Complexity complexity);

// Ancestor indices.
std::vector<std::size_t> multinomial_resample(std::span<const double> weights, std::size_t count,
                                              Rng& rng);
std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t count,
                                             Rng& rng);

}  // namespace possmc
