#include "possmc/multi_filter.hpp"

#include <algorithm>
#include <map>

namespace possmc {

namespace {

// Builds a group list from raw (unnormalized) group numerators and raw
// within-group weights. Zero groups are dropped.
std::vector<SampleGroup> normalize_groups(std::vector<SampleGroup> raw) {
  std::vector<SampleGroup> out;
  double total = 0.0;
  for (auto& g : raw) {
    if (g.weight > 0.0) {
      total += g.weight;
      out.push_back(std::move(g));
    }
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw DegenerateWeights("all group weights vanished");
  for (auto& g : out) g.weight /= total;
  return out;
}

}  // namespace

OpmApproximation approximate_opm(const std::vector<WeightedPossibility>& mixture, std::size_t budget,
                                 Rng& rng, const FilterConfig& cfg, const PointMap& post) {
  if (mixture.empty()) throw InvalidArgument("approximate_opm: empty mixture");
  if (budget < 1) throw InvalidArgument("approximate_opm: budget must be >= 1");
  std::vector<double> p;
  p.reserve(mixture.size());
  for (const auto& m : mixture) p.push_back(m.weight);
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidArgument("approximate_opm: negative mixture weight");
    total += v;
  }
  if (!(total > 0.0)) throw InvalidArgument("approximate_opm: zero total weight");

  const PmfSampler select(p);
  // Groups keyed by mixture index, in order of first selection.
  std::map<std::size_t, std::size_t> slot;
  std::vector<std::vector<Vector>> points;
  std::vector<std::vector<double>> raw;
  for (std::size_t k = 0; k < budget; ++k) {
    const std::size_t f = mixture.size() == 1 ? 0 : select(rng);
    auto [it, fresh] = slot.try_emplace(f, points.size());
    if (fresh) {
      points.emplace_back();
      raw.emplace_back();
    }
    const auto& fn = mixture[f].function;
    Vector x = draw_from_possibility(fn, cfg.continuous, cfg.discrete, rng);
    if (post) x = post(std::move(x));
    raw[it->second].push_back(eval(fn, x));
    points[it->second].push_back(std::move(x));
  }

  std::vector<SampleGroup> groups;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double top = *std::max_element(raw[i].begin(), raw[i].end());
    const double m = static_cast<double>(raw[i].size());
    if (top > 0.0) {
      for (double& w : raw[i]) w /= top;
    }
    groups.push_back({m * top, WeightedSampleSet(std::move(raw[i]), std::move(points[i]))});
  }
  return OpmApproximation(normalize_groups(std::move(groups)));
}

MultiPossibilityState multi_predict(const MultiPossibilityState& state,
                                    const GaussianKernel& transition, const FilterConfig& cfg,
                                    Rng& rng) {
  std::vector<std::vector<Vector>> predicted(state.group_count());
  for (std::size_t i = 0; i < state.group_count(); ++i) {
    const auto& samples = state.group(i).samples;
    predicted[i].reserve(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
      predicted[i].push_back(draw_from_kernel(transition, samples.point(j), cfg.continuous, rng));
    }
  }
  return multi_predict_at(state, predicted, transition, cfg.complexity);
}

MultiPossibilityState multi_predict_at(const MultiPossibilityState& state,
                                       const std::vector<std::vector<Vector>>& predicted,
                                       const GaussianKernel& transition, Complexity complexity) {
  if (predicted.size() != state.group_count()) {
    throw InvalidArgument("multi_predict_at: one point list per group expected");
  }
  std::vector<SampleGroup> groups;
  groups.reserve(state.group_count());
  for (std::size_t i = 0; i < state.group_count(); ++i) {
    const auto& g = state.group(i);
    // r_l = max_j w_j g(x̃_l | x_j), so the double maximum of the group
    // numerator is max_l r_l.
    std::vector<double> r = predicted_weights(g.samples.points(), g.samples.weights(), predicted[i],
                                              transition, complexity);
    const double top = *std::max_element(r.begin(), r.end());
    if (top > 0.0) {
      for (double& w : r) w /= top;
    }
    groups.push_back({g.weight * top, WeightedSampleSet(std::move(r), predicted[i])});
  }
  return OpmApproximation(normalize_groups(std::move(groups)));
}

MultiPossibilityState multi_update(const MultiPossibilityState& predicted,
                                   const LikelihoodSpec& likelihood, const Vector& y, Rng& rng) {
  std::vector<std::pair<double, GaussianKernel>> drawn;
  const std::vector<std::pair<double, GaussianKernel>>* family = nullptr;
  if (const auto* finite = std::get_if<FiniteLikelihood>(&likelihood)) {
    family = &finite->family;
  } else {
    const auto& sampled = std::get<SampledLikelihood>(likelihood);
    if (!sampled.draw || sampled.draws < 1) throw InvalidArgument("multi_update: bad likelihood sampler");
    for (std::size_t l = 0; l < sampled.draws; ++l) drawn.emplace_back(1.0, sampled.draw(rng));
    family = &drawn;
  }
  if (family->empty()) throw InvalidArgument("multi_update: empty likelihood family");

  std::vector<SampleGroup> groups;
  groups.reserve(family->size() * predicted.group_count());
  for (const auto& [v, s] : *family) {
    if (!(v >= 0.0)) throw InvalidArgument("multi_update: negative likelihood weight");
    for (const auto& g : predicted.groups()) {
      std::vector<double> w(g.samples.size());
      double top = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = g.samples.weight(j) > 0.0 ? g.samples.weight(j) * s.possibility(y, g.samples.point(j))
                                         : 0.0;
        top = std::max(top, w[j]);
      }
      if (top > 0.0) {
        for (double& x : w) x /= top;
      }
      groups.push_back({g.weight * v * top, g.samples.reweighted(std::move(w))});
    }
  }
  return OpmApproximation(normalize_groups(std::move(groups)));
}

MultiPossibilityState multi_resample(const MultiPossibilityState& state, std::size_t budget,
                                     const FilterConfig& cfg, Rng& rng) {
  if (state.group_count() == 0) throw InvalidArgument("multi_resample: empty state");
  if (budget < 1) throw InvalidArgument("multi_resample: budget must be >= 1");

  std::vector<std::size_t> counts(state.group_count(), 0);
  if (state.group_count() == 1) {
    counts[0] = budget;
  } else {
    std::vector<double> W;
    W.reserve(state.group_count());
    for (const auto& g : state.groups()) W.push_back(g.weight);
    const PmfSampler select(W);
    for (std::size_t k = 0; k < budget; ++k) ++counts[select(rng)];
  }

  std::vector<SampleGroup> groups;
  for (std::size_t i = 0; i < state.group_count(); ++i) {
    if (counts[i] == 0) continue;
    const auto& samples = state.group(i).samples;
    const auto ancestors = resample_ancestors(samples.weights(), counts[i], cfg, rng);
    std::vector<Vector> points;
    std::vector<double> w;
    points.reserve(ancestors.size());
    w.reserve(ancestors.size());
    for (std::size_t a : ancestors) {
      points.push_back(samples.point(a));
      w.push_back(samples.weight(a));
    }
    const double top = normalize_to_max(w);
    groups.push_back({static_cast<double>(counts[i]) * top,
                      WeightedSampleSet(std::move(w), std::move(points))});
  }
  return OpmApproximation(normalize_groups(std::move(groups)));
}

Vector map_multi(const MultiPossibilityState& state) {
  double best = -1.0;
  const Vector* arg = nullptr;
  for (const auto& g : state.groups()) {
    for (std::size_t j = 0; j < g.samples.size(); ++j) {
      const double v = g.weight * g.samples.weight(j);
      if (v > best) {
        best = v;
        arg = &g.samples.point(j);
      }
    }
  }
  if (!arg) throw InvalidArgument("map_multi: empty state");
  return *arg;
}

}  // namespace possmc
