#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "possmc/types.hpp"

namespace possmc {

// Divides by the largest entry and returns that entry.
// Throws DegenerateWeights when every entry is zero (or any is not finite).
double normalize_to_max(std::span<double> weights);

// Divides by the sum and returns that sum. Throws DegenerateWeights on a zero sum.
double normalize_to_sum(std::span<double> weights);

// Possibility-weighted support points {(w_j, x_j)}. Points are held behind a
// shared pointer so that reweighted copies do not duplicate them.
class WeightedSampleSet {
public:
  WeightedSampleSet() = default;
  WeightedSampleSet(std::vector<double> weights, std::vector<Vector> points);
  WeightedSampleSet(std::vector<double> weights, std::shared_ptr<const std::vector<Vector>> points);

  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  double weight(std::size_t j) const { return weights_[j]; }
  const Vector& point(std::size_t j) const { return (*points_)[j]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Vector>& points() const { return *points_; }
  const std::shared_ptr<const std::vector<Vector>>& shared_points() const { return points_; }

  // Same points, new weights.
  WeightedSampleSet reweighted(std::vector<double> weights) const;

  // Index of the largest weight, lowest index on ties.
  std::size_t argmax() const;

  // Weights finite, non-negative, largest equal to 1 within tol.
  bool is_normalized(double tol = 1e-12) const;

private:
  std::vector<double> weights_;
  std::shared_ptr<const std::vector<Vector>> points_ = std::make_shared<std::vector<Vector>>();
};

struct SampleGroup {
  double weight = 0.0;  // probability of the group
  WeightedSampleSet samples;
};

// L = {(W_i, X_i)}: a probability over groups of possibility-weighted samples.
class OpmApproximation {
public:
  OpmApproximation() = default;
  explicit OpmApproximation(std::vector<SampleGroup> groups) : groups_(std::move(groups)) {}

  std::size_t group_count() const { return groups_.size(); }
  std::size_t total_samples() const;
  const std::vector<SampleGroup>& groups() const { return groups_; }
  const SampleGroup& group(std::size_t i) const { return groups_[i]; }

  // Group weights sum to 1 and each group is max-normalized.
  bool is_valid(double tol = 1e-12) const;

private:
  std::vector<SampleGroup> groups_;
};

using TestFunction = std::function<double(const Vector&)>;

// sum_i W_i max_j w_ij phi(x_ij)
double evaluate_opm(const OpmApproximation& opm, const TestFunction& phi);

}  // namespace possmc
