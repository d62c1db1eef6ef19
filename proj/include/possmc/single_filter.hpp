#pragma once

#include "possmc/filter_config.hpp"
#include "possmc/opm.hpp"

namespace possmc {

// Filter state of the single-possibility recursion: N support points whose
// weights have maximum 1.
using SinglePossibilityState = WeightedSampleSet;

// N points from the sampling law of the prior, weighted by the prior.
SinglePossibilityState initialize_single(const PossibilityFunction& prior, const FilterConfig& cfg,
                                         Rng& rng);

// Draws one predicted point per sample, then weights them.
SinglePossibilityState single_predict(const SinglePossibilityState& state,
                                      const GaussianKernel& transition, const FilterConfig& cfg,
                                      Rng& rng);

// Weighting half of the prediction, for externally drawn points.
SinglePossibilityState single_predict_at(const SinglePossibilityState& state,
                                         std::vector<Vector> predicted,
                                         const GaussianKernel& transition, Complexity complexity);

// w_i <- w_i s(y | x_i), max-normalized. Points are unchanged.
SinglePossibilityState single_update(const SinglePossibilityState& predicted,
                                     const GaussianKernel& observation, const Vector& y);

SinglePossibilityState resample_single(const SinglePossibilityState& state, const FilterConfig& cfg,
                                       Rng& rng);

// Highest-weight point, lowest index on ties.
Vector map_single(const SinglePossibilityState& state);

}  // namespace possmc
