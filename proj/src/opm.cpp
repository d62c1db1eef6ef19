#include "possmc/opm.hpp"

#include <algorithm>
#include <cmath>

namespace possmc {

double normalize_to_max(std::span<double> weights) {
  double top = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw DegenerateWeights("weight is negative or not finite");
    top = std::max(top, w);
  }
  if (!(top > 0.0)) throw DegenerateWeights("all weights are zero");
  for (double& w : weights) w /= top;
  return top;
}

double normalize_to_sum(std::span<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw DegenerateWeights("weight is negative or not finite");
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateWeights("all weights are zero");
  for (double& w : weights) w /= total;
  return total;
}

WeightedSampleSet::WeightedSampleSet(std::vector<double> weights, std::vector<Vector> points)
    : WeightedSampleSet(std::move(weights),
                        std::make_shared<const std::vector<Vector>>(std::move(points))) {}

WeightedSampleSet::WeightedSampleSet(std::vector<double> weights,
                                     std::shared_ptr<const std::vector<Vector>> points)
    : weights_(std::move(weights)), points_(std::move(points)) {
  if (!points_ || points_->size() != weights_.size()) {
    throw InvalidArgument("sample set needs one weight per point");
  }
}

WeightedSampleSet WeightedSampleSet::reweighted(std::vector<double> weights) const {
  return WeightedSampleSet(std::move(weights), points_);
}

std::size_t WeightedSampleSet::argmax() const {
  if (weights_.empty()) throw InvalidArgument("argmax of an empty sample set");
  return static_cast<std::size_t>(std::max_element(weights_.begin(), weights_.end()) -
                                  weights_.begin());
}

bool WeightedSampleSet::is_normalized(double tol) const {
  if (weights_.empty()) return false;
  double top = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) return false;
    top = std::max(top, w);
  }
  return std::abs(top - 1.0) <= tol;
}

std::size_t OpmApproximation::total_samples() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.samples.size();
  return n;
}

bool OpmApproximation::is_valid(double tol) const {
  if (groups_.empty()) return false;
  double total = 0.0;
  for (const auto& g : groups_) {
    if (!(g.weight >= 0.0) || !g.samples.is_normalized(tol)) return false;
    total += g.weight;
  }
  return std::abs(total - 1.0) <= tol;
}

double evaluate_opm(const OpmApproximation& opm, const TestFunction& phi) {
  double total = 0.0;
  for (const auto& g : opm.groups()) {
    if (g.samples.empty()) throw InvalidArgument("evaluate_opm: empty group");
    double best = 0.0;
    for (std::size_t j = 0; j < g.samples.size(); ++j) {
      best = std::max(best, g.samples.weight(j) * phi(g.samples.point(j)));
    }
    total += g.weight * best;
  }
  return total;
}

}  // namespace possmc
