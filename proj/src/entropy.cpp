#include "possmc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace possmc {

namespace {

double x_star_residual(double x) { return std::exp(-0.5 * x * x) * (x * x + 1.0) - 1.0; }

void require_weights(std::span<const double> weights) {
  if (weights.empty()) throw InvalidArgument("empty weight array");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("weights must be finite and >= 0");
  }
}

}  // namespace

GlobalEntropyTables solve_x_star() {
  // The residual is negative at -3 and positive at -1.
  double lo = -3.0;
  double hi = -1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (x_star_residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = std::abs(x_star_residual(lo)) < std::abs(x_star_residual(hi)) ? lo : hi;
  GlobalEntropyTables t;
  t.x_star = x;
  t.f_star = std::exp(-0.5 * x * x);
  t.breakpoint = 0.5 * t.f_star;
  return t;
}

const GlobalEntropyTables& global_entropy_tables() {
  static const GlobalEntropyTables tables = solve_x_star();
  return tables;
}

double global_entropy_inverse_cdf(double u, const GlobalEntropyTables& t) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("inverse CDF argument must lie in (0, 1)");
  if (u < t.breakpoint) return -std::sqrt(-2.0 * std::log(2.0 * u));
  if (u > 1.0 - t.breakpoint) return std::sqrt(-2.0 * std::log(2.0 * (1.0 - u)));
  return (2.0 * u - 1.0) * std::abs(t.x_star) / (1.0 - t.f_star);
}

Vector sample_global_entropy_gaussian(const Vector& mean, const CholeskyFactor& factor, Rng& rng) {
  require_dim(mean.size(), factor.dim(), "global entropy sampler");
  const auto& t = global_entropy_tables();
  Vector z(mean.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = global_entropy_inverse_cdf(uniform_open(rng), t);
  return mean + factor.color(z);
}

Vector sample_global_entropy_gaussian(const Vector& mean, const Matrix& shape, Rng& rng) {
  return sample_global_entropy_gaussian(mean, CholeskyFactor(shape), rng);
}

Vector sample_gaussian(const Vector& mean, const CholeskyFactor& factor, Rng& rng) {
  require_dim(mean.size(), factor.dim(), "Gaussian sampler");
  std::normal_distribution<double> normal;
  Vector z(mean.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = normal(rng);
  return mean + factor.color(z);
}

Vector sample_scaled(const PossibilityFunction& f, Rng& rng) {
  if (const auto* g = f.get_if<GaussianPossibility>()) {
    return sample_gaussian(g->mean(), g->factor(), rng);
  }
  if (const auto* box = f.get_if<BoxIndicator>()) {
    Vector x(box->dim());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      x[k] = box->lower()[k] + (box->upper()[k] - box->lower()[k]) * uniform_open(rng);
    }
    return x;
  }
  if (const auto* p = f.get_if<PointIndicator>()) return p->point();
  throw InvalidArgument("sample_scaled: max-mixtures are sampled by component selection");
}

Pmf pmf_scaled(std::span<const double> weights) {
  require_weights(weights);
  Pmf pmf;
  pmf.probabilities.assign(weights.begin(), weights.end());
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DegenerateWeights("pmf_scaled: all weights are zero");
  for (double& p : pmf.probabilities) p /= total;
  return pmf;
}

Pmf pmf_global_entropy(std::span<const double> weights) {
  require_weights(weights);
  const double top = *std::max_element(weights.begin(), weights.end());
  if (std::abs(top - 1.0) > 1e-9) throw InvalidArgument("pmf_global_entropy: max weight must be 1");

  const std::size_t n = weights.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });

  // In increasing order, each point takes the largest mass that still leaves
  // every later prefix within its bound:
  // W_i = min_{j >= i} (w_j - sum_{k<i} W_k) / (j - i + 1).
  std::vector<double> sorted(n);
  double assigned = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = i; j < n; ++j) {
      best = std::min(best, (weights[order[j]] - assigned) / static_cast<double>(j - i + 1));
    }
    sorted[i] = std::max(best, 0.0);
    assigned += sorted[i];
  }

  Pmf pmf;
  pmf.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) pmf.probabilities[order[i]] = sorted[i] / assigned;
  return pmf;
}

Pmf pmf_local_entropy(std::span<const double> weights) {
  require_weights(weights);
  const std::size_t n = weights.size();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (total < 1.0 - 1e-12) throw InvalidArgument("pmf_local_entropy: weights sum below 1");

  std::vector<double> desc(weights.begin(), weights.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());

  // With the k largest weights capped at the level, the level is
  // (1 - sum of the rest) / k; pick the k whose level falls in its segment.
  double level = desc.front();
  double tail = total;
  for (std::size_t k = 1; k <= n; ++k) {
    tail -= desc[k - 1];
    const double candidate = std::max(1.0 - tail, 0.0) / static_cast<double>(k);
    if (k == n || candidate >= desc[k]) {
      level = std::min(candidate, desc[k - 1]);
      break;
    }
  }

  Pmf pmf;
  pmf.level = level;
  pmf.probabilities.resize(n);
  pmf.capped.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pmf.capped[i] = weights[i] <= level;
    pmf.probabilities[i] = std::min(weights[i], level);
    sum += pmf.probabilities[i];
  }
  for (double& p : pmf.probabilities) p /= sum;
  return pmf;
}

double entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

PmfSampler::PmfSampler(std::span<const double> probabilities) {
  if (probabilities.empty()) throw InvalidArgument("PmfSampler: empty PMF");
  cumulative_.resize(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (!(probabilities[i] >= 0.0)) throw InvalidArgument("PmfSampler: negative probability");
    acc += probabilities[i];
    cumulative_[i] = acc;
  }
  if (!(acc > 0.0)) throw InvalidArgument("PmfSampler: zero total mass");
  for (double& c : cumulative_) c /= acc;
}

std::size_t PmfSampler::operator()(Rng& rng) const {
  const double u = uniform_open(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    // Rounding left u above the last sum; take the last entry with mass.
    --it;
    while (it != cumulative_.begin() && *(it - 1) == *it) --it;
  }
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::size_t sample_pmf(const Pmf& pmf, Rng& rng) { return PmfSampler(pmf.probabilities)(rng); }

}  // namespace possmc
