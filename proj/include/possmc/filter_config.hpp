#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "possmc/entropy.hpp"
#include "possmc/kernel.hpp"

namespace possmc {

// Law used to place support points for a continuous possibility function.
enum class ContinuousSampler { Scaled, Global };

// Law used to draw indices from possibilistic weights.
enum class DiscretePmf { Scaled, Global, Local };

// Quadratic prediction keeps every ancestor in the supremum; linear keeps only
// the sample's own ancestor.
enum class Complexity { Linear, Quadratic };

enum class ResamplingMode { All, Selective };

struct FilterConfig {
  ContinuousSampler continuous = ContinuousSampler::Global;
  DiscretePmf discrete = DiscretePmf::Local;
  Complexity complexity = Complexity::Quadratic;
  ResamplingMode resampling = ResamplingMode::Selective;
  std::size_t samples = 256;
  std::size_t likelihood_draws = 1;

  void validate() const;
};

std::string to_string(ContinuousSampler s);
std::string to_string(DiscretePmf d);
std::string to_string(Complexity c);
std::string to_string(ResamplingMode r);

Pmf make_pmf(std::span<const double> weights, DiscretePmf kind);

// One draw from the sampling law of g(. | given), wrapped if the kernel has
// angular coordinates.
Vector draw_from_kernel(const GaussianKernel& kernel, const Vector& given, ContinuousSampler sampler,
                        Rng& rng);

// One draw from the sampling law of f; max-mixtures first pick a component
// with the discrete law of their weights.
Vector draw_from_possibility(const PossibilityFunction& f, ContinuousSampler sampler,
                             DiscretePmf discrete, Rng& rng);

// Unnormalized predicted weights for points drawn from g(. | previous[i]):
//   quadratic: r_i = max_j w_j g(predicted_i | previous_j)
//   linear:    r_i = w_i g(predicted_i | previous_i)
// Previous weights must be max-normalized.
std::vector<double> predicted_weights(std::span<const Vector> previous,
                                      std::span<const double> previous_weights,
                                      std::span<const Vector> predicted, const GaussianKernel& kernel,
                                      Complexity complexity);

// Ancestor indices for a resampling step producing `count` samples out of the
// weighted set. In selective mode every uncapped sample of the water-pouring
// PMF is kept once and only the remaining slots are drawn, from the discrete
// law restricted to the capped samples.
std::vector<std::size_t> resample_ancestors(std::span<const double> weights, std::size_t count,
                                            const FilterConfig& cfg, Rng& rng);

}  // namespace possmc
