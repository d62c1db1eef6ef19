#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "possmc/filter_config.hpp"
#include "possmc/opm.hpp"

namespace possmc {

using MultiPossibilityState = OpmApproximation;

// One term of a finite probability measure over possibility functions.
struct WeightedPossibility {
  double weight = 0.0;
  PossibilityFunction function;
};

// Optional post-processing of freshly drawn points (angle wrapping).
using PointMap = std::function<Vector(Vector)>;

// Draws N selections from the mixture, groups identical selections and places
// one support point per selection. Group weights follow
// W_i ∝ M_i max_j w̃_ij; within-group weights are max-normalized.
OpmApproximation approximate_opm(const std::vector<WeightedPossibility>& mixture, std::size_t budget,
                                 Rng& rng, const FilterConfig& cfg, const PointMap& post = {});

MultiPossibilityState multi_predict(const MultiPossibilityState& state,
                                    const GaussianKernel& transition, const FilterConfig& cfg,
                                    Rng& rng);

// Weighting half of the prediction; predicted[i][j] is drawn from
// g(. | x_ij).
MultiPossibilityState multi_predict_at(const MultiPossibilityState& state,
                                       const std::vector<std::vector<Vector>>& predicted,
                                       const GaussianKernel& transition, Complexity complexity);

// Likelihood given as a finite weighted family {(V_l, s_l)}.
struct FiniteLikelihood {
  std::vector<std::pair<double, GaussianKernel>> family;
};

// Likelihood given as a sampler over kernels, drawn `draws` times per update.
struct SampledLikelihood {
  std::function<GaussianKernel(Rng&)> draw;
  std::size_t draws = 1;
};

using LikelihoodSpec = std::variant<FiniteLikelihood, SampledLikelihood>;

inline LikelihoodSpec single_likelihood(GaussianKernel s) {
  return FiniteLikelihood{{{1.0, std::move(s)}}};
}

// Creates one group per (group, likelihood term) pair; positions are shared
// between the replicas of a group. Groups whose weight vanishes are dropped.
MultiPossibilityState multi_update(const MultiPossibilityState& predicted,
                                   const LikelihoodSpec& likelihood, const Vector& y, Rng& rng);

// Approximation step applied to the sampled o.p.m.: groups are selected by
// their weights and support points by ancestor selection inside the group.
MultiPossibilityState multi_resample(const MultiPossibilityState& state, std::size_t budget,
                                     const FilterConfig& cfg, Rng& rng);

// Point maximizing W_i w_ij, lowest (i, j) on ties.
Vector map_multi(const MultiPossibilityState& state);

}  // namespace possmc
