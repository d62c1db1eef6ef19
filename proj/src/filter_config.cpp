#include "possmc/filter_config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "possmc/angles.hpp"
#include "possmc/opm.hpp"

namespace possmc {

namespace {

// -log(kTinyValue): beyond this exponent a kernel value is flushed to zero.
constexpr double kMaxExponent = 690.7755278982137;

struct WhitenedSet {
  std::vector<Vector> points;
  std::vector<std::size_t> order;  // indices sorted by first coordinate
  std::vector<double> keys;        // first coordinate in sorted order
};

WhitenedSet whiten_sorted(std::vector<Vector> points) {
  WhitenedSet s;
  s.points = std::move(points);
  s.order.resize(s.points.size());
  std::iota(s.order.begin(), s.order.end(), 0);
  std::sort(s.order.begin(), s.order.end(),
            [&](std::size_t a, std::size_t b) { return s.points[a][0] < s.points[b][0]; });
  s.keys.resize(s.order.size());
  for (std::size_t k = 0; k < s.order.size(); ++k) s.keys[k] = s.points[s.order[k]][0];
  return s;
}

// max_j lw_j - |a - b_j|^2 / 2 over the sorted set, seeded with a known value.
// lw_j <= 0, so a candidate whose first-coordinate gap alone exceeds the
// current best cannot win.
double pruned_max(const Vector& a, const WhitenedSet& b, std::span<const double> log_w, double best) {
  const double a0 = a[0];
  const auto start = static_cast<std::ptrdiff_t>(
      std::lower_bound(b.keys.begin(), b.keys.end(), a0) - b.keys.begin());
  const auto n = static_cast<std::ptrdiff_t>(b.keys.size());
  auto visit = [&](std::ptrdiff_t k) {
    const std::size_t j = b.order[static_cast<std::size_t>(k)];
    if (log_w[j] == -std::numeric_limits<double>::infinity()) return;
    const double v = log_w[j] - 0.5 * (a - b.points[j]).squaredNorm();
    best = std::max(best, v);
  };
  for (std::ptrdiff_t k = start; k < n; ++k) {
    const double gap = b.keys[static_cast<std::size_t>(k)] - a0;
    if (0.5 * gap * gap > std::min(-best, kMaxExponent)) break;
    visit(k);
  }
  for (std::ptrdiff_t k = start - 1; k >= 0; --k) {
    const double gap = a0 - b.keys[static_cast<std::size_t>(k)];
    if (0.5 * gap * gap > std::min(-best, kMaxExponent)) break;
    visit(k);
  }
  return best;
}

// 1-D case: lw_j - (a - b_j)^2 / 2 = -a^2/2 + (b_j a + lw_j - b_j^2/2), so the
// maximizer is read off the upper envelope of lines. The winning value is
// recomputed in the direct form, checking envelope neighbours against rounding.
class LineEnvelope {
 public:
  LineEnvelope(const WhitenedSet& b, std::span<const double> log_w) : b_(b), log_w_(log_w) {
    for (std::size_t j : b.order) {
      if (log_w[j] == -std::numeric_limits<double>::infinity()) continue;
      if (!hull_.empty() && slope(hull_.back()) == slope(j)) {
        if (intercept(hull_.back()) >= intercept(j)) continue;
        hull_.pop_back();
      }
      while (hull_.size() >= 2 && !keeps(hull_[hull_.size() - 2], hull_.back(), j)) hull_.pop_back();
      hull_.push_back(j);
    }
    for (std::size_t k = 1; k < hull_.size(); ++k) breaks_.push_back(meet(hull_[k - 1], hull_[k]));
  }

  double max(double a) const {
    if (hull_.empty()) return -std::numeric_limits<double>::infinity();
    const auto k = static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), a) -
                                            breaks_.begin());
    double best = value(hull_[k], a);
    if (k > 0) best = std::max(best, value(hull_[k - 1], a));
    if (k + 1 < hull_.size()) best = std::max(best, value(hull_[k + 1], a));
    return best;
  }

 private:
  double slope(std::size_t j) const { return b_.points[j][0]; }
  double intercept(std::size_t j) const { return log_w_[j] - 0.5 * slope(j) * slope(j); }
  double meet(std::size_t p, std::size_t q) const {
    return (intercept(p) - intercept(q)) / (slope(q) - slope(p));
  }
  // Middle line q survives between p and r (slopes increasing).
  bool keeps(std::size_t p, std::size_t q, std::size_t r) const { return meet(p, q) < meet(q, r); }
  double value(std::size_t j, double a) const {
    const double d = a - slope(j);
    return log_w_[j] - 0.5 * d * d;
  }

  const WhitenedSet& b_;
  std::span<const double> log_w_;
  std::vector<std::size_t> hull_;
  std::vector<double> breaks_;
};

}  // namespace

void FilterConfig::validate() const {
  if (samples < 1) throw InvalidArgument("filter sample budget must be >= 1");
  if (likelihood_draws < 1) throw InvalidArgument("likelihood draw count must be >= 1");
}

std::string to_string(ContinuousSampler s) {
  return s == ContinuousSampler::Scaled ? "scaled" : "global";
}

std::string to_string(DiscretePmf d) {
  switch (d) {
    case DiscretePmf::Scaled: return "scaled";
    case DiscretePmf::Global: return "global";
    case DiscretePmf::Local: return "local";
  }
  return "?";
}

std::string to_string(Complexity c) { return c == Complexity::Linear ? "linear" : "quadratic"; }

std::string to_string(ResamplingMode r) { return r == ResamplingMode::All ? "all" : "selective"; }

Pmf make_pmf(std::span<const double> weights, DiscretePmf kind) {
  switch (kind) {
    case DiscretePmf::Scaled: return pmf_scaled(weights);
    case DiscretePmf::Global: return pmf_global_entropy(weights);
    case DiscretePmf::Local: return pmf_local_entropy(weights);
  }
  throw InvalidArgument("unknown discrete PMF");
}

Vector draw_from_kernel(const GaussianKernel& kernel, const Vector& given, ContinuousSampler sampler,
                        Rng& rng) {
  const Vector m = kernel.mean(given);
  Vector x = sampler == ContinuousSampler::Scaled
                 ? sample_gaussian(m, kernel.factor(), rng)
                 : sample_global_entropy_gaussian(m, kernel.factor(), rng);
  return kernel.wrap(std::move(x));
}

Vector draw_from_possibility(const PossibilityFunction& f, ContinuousSampler sampler,
                             DiscretePmf discrete, Rng& rng) {
  if (const auto* mix = f.get_if<MaxMixture>()) {
    std::vector<double> w = mix->weights();
    normalize_to_max(w);
    const std::size_t k = sample_pmf(make_pmf(w, discrete), rng);
    return draw_from_possibility(mix->components()[k], sampler, discrete, rng);
  }
  if (const auto* g = f.get_if<GaussianPossibility>(); g && sampler == ContinuousSampler::Global) {
    return sample_global_entropy_gaussian(g->mean(), g->factor(), rng);
  }
  // Boxes and points have the same law under both samplers.
  return sample_scaled(f, rng);
}

std::vector<double> predicted_weights(std::span<const Vector> previous,
                                      std::span<const double> previous_weights,
                                      std::span<const Vector> predicted, const GaussianKernel& kernel,
                                      Complexity complexity) {
  const std::size_t n = previous.size();
  if (previous_weights.size() != n || predicted.size() != n) {
    throw InvalidArgument("predicted_weights: size mismatch");
  }
  std::vector<double> raw(n, 0.0);
  if (complexity == Complexity::Linear) {
    for (std::size_t i = 0; i < n; ++i) {
      if (previous_weights[i] > 0.0) {
        raw[i] = previous_weights[i] * kernel.possibility(predicted[i], previous[i]);
      }
    }
    return raw;
  }

  std::vector<double> log_w(n);
  for (std::size_t j = 0; j < n; ++j) {
    log_w[j] = previous_weights[j] > 0.0 ? std::log(previous_weights[j])
                                         : -std::numeric_limits<double>::infinity();
  }
  const auto& factor = kernel.factor();

  if (kernel.is_linear_euclidean()) {
    std::vector<Vector> means(n);
    std::vector<Vector> targets(n);
    for (std::size_t j = 0; j < n; ++j) {
      means[j] = factor.whiten(kernel.mean(previous[j]));
      targets[j] = factor.whiten(predicted[j]);
    }
    const WhitenedSet sorted = whiten_sorted(std::move(means));
    if (kernel.output_dim() == 1) {
      const LineEnvelope envelope(sorted, log_w);
      for (std::size_t i = 0; i < n; ++i) raw[i] = clamped_exp(envelope.max(targets[i][0]));
      return raw;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double seed = -std::numeric_limits<double>::infinity();
      if (log_w[i] > -std::numeric_limits<double>::infinity()) {
        seed = log_w[i] - 0.5 * (targets[i] - sorted.points[i]).squaredNorm();
      }
      raw[i] = clamped_exp(pruned_max(targets[i], sorted, log_w, seed));
    }
    return raw;
  }

  std::vector<Vector> means(n);
  for (std::size_t j = 0; j < n; ++j) means[j] = kernel.mean(previous[j]);
  const auto lower = factor.lower().triangularView<Eigen::Lower>();
  Vector d(kernel.output_dim());
  for (std::size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (log_w[j] <= best) continue;
      d.noalias() = predicted[i] - means[j];
      for (int a : kernel.angular()) d[a] = wrap_angle_unchecked(d[a]);
      lower.solveInPlace(d);
      best = std::max(best, log_w[j] - 0.5 * d.squaredNorm());
    }
    raw[i] = clamped_exp(best);
  }
  return raw;
}

std::vector<std::size_t> resample_ancestors(std::span<const double> weights, std::size_t count,
                                            const FilterConfig& cfg, Rng& rng) {
  const std::size_t n = weights.size();
  if (n == 0) throw InvalidArgument("resampling an empty sample set");
  std::vector<double> w(weights.begin(), weights.end());
  normalize_to_max(w);

  std::vector<std::size_t> ancestors;
  ancestors.reserve(count);
  if (cfg.resampling == ResamplingMode::All) {
    const PmfSampler draw(make_pmf(w, cfg.discrete).probabilities);
    for (std::size_t k = 0; k < count; ++k) ancestors.push_back(draw(rng));
    return ancestors;
  }

  const Pmf water = pmf_local_entropy(w);
  std::vector<std::size_t> kept;
  std::vector<std::size_t> capped;
  for (std::size_t i = 0; i < n; ++i) (water.capped[i] ? capped : kept).push_back(i);

  if (kept.size() >= count) {
    // Budget smaller than the uncapped set: keep the heaviest ones.
    std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    kept.resize(count);
    std::sort(kept.begin(), kept.end());
    return kept;
  }
  ancestors = kept;
  if (capped.empty()) {
    // No low-weight samples to draw from; fill from the whole set.
    const PmfSampler draw(make_pmf(w, cfg.discrete).probabilities);
    while (ancestors.size() < count) ancestors.push_back(draw(rng));
    return ancestors;
  }
  const Pmf full = make_pmf(w, cfg.discrete);
  std::vector<double> restricted(capped.size());
  for (std::size_t k = 0; k < capped.size(); ++k) restricted[k] = full.probabilities[capped[k]];
  if (std::accumulate(restricted.begin(), restricted.end(), 0.0) <= 0.0) {
    for (std::size_t k = 0; k < capped.size(); ++k) restricted[k] = w[capped[k]];
  }
  if (std::accumulate(restricted.begin(), restricted.end(), 0.0) <= 0.0) {
    const PmfSampler draw(full.probabilities);
    while (ancestors.size() < count) ancestors.push_back(draw(rng));
    return ancestors;
  }
  const PmfSampler draw(restricted);
  while (ancestors.size() < count) ancestors.push_back(capped[draw(rng)]);
  return ancestors;
}

}  // namespace possmc
