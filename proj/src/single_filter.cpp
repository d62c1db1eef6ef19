#include "possmc/single_filter.hpp"

namespace possmc {

SinglePossibilityState initialize_single(const PossibilityFunction& prior, const FilterConfig& cfg,
                                         Rng& rng) {
  cfg.validate();
  std::vector<Vector> points;
  std::vector<double> weights;
  points.reserve(cfg.samples);
  weights.reserve(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    points.push_back(draw_from_possibility(prior, cfg.continuous, cfg.discrete, rng));
    weights.push_back(eval(prior, points.back()));
  }
  normalize_to_max(weights);
  return {std::move(weights), std::move(points)};
}

SinglePossibilityState single_predict(const SinglePossibilityState& state,
                                      const GaussianKernel& transition, const FilterConfig& cfg,
                                      Rng& rng) {
  std::vector<Vector> predicted;
  predicted.reserve(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    predicted.push_back(draw_from_kernel(transition, state.point(i), cfg.continuous, rng));
  }
  return single_predict_at(state, std::move(predicted), transition, cfg.complexity);
}

SinglePossibilityState single_predict_at(const SinglePossibilityState& state,
                                         std::vector<Vector> predicted,
                                         const GaussianKernel& transition, Complexity complexity) {
  std::vector<double> w =
      predicted_weights(state.points(), state.weights(), predicted, transition, complexity);
  normalize_to_max(w);
  return {std::move(w), std::move(predicted)};
}

SinglePossibilityState single_update(const SinglePossibilityState& predicted,
                                     const GaussianKernel& observation, const Vector& y) {
  std::vector<double> w(predicted.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = predicted.weight(i) > 0.0
               ? predicted.weight(i) * observation.possibility(y, predicted.point(i))
               : 0.0;
  }
  normalize_to_max(w);
  return predicted.reweighted(std::move(w));
}

SinglePossibilityState resample_single(const SinglePossibilityState& state, const FilterConfig& cfg,
                                       Rng& rng) {
  const auto ancestors = resample_ancestors(state.weights(), state.size(), cfg, rng);
  std::vector<Vector> points;
  std::vector<double> weights;
  points.reserve(ancestors.size());
  weights.reserve(ancestors.size());
  for (std::size_t a : ancestors) {
    points.push_back(state.point(a));
    weights.push_back(state.weight(a));
  }
  normalize_to_max(weights);
  return {std::move(weights), std::move(points)};
}

Vector map_single(const SinglePossibilityState& state) { return state.point(state.argmax()); }

}  // namespace possmc
