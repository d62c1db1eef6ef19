#pragma once

#include <optional>
#include <span>
#include <vector>

#include "possmc/possibility.hpp"

namespace possmc {

// Uniform draw on the open interval (0, 1) built from 53 random bits.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Constants of the maximum-entropy law bounded by the standard Gaussian
// possibility function.
struct GlobalEntropyTables {
  double x_star = 0.0;      // negative root of exp(-x^2/2)(x^2+1) = 1
  double f_star = 0.0;      // exp(-x_star^2/2) = 1/(x_star^2+1)
  double breakpoint = 0.0;  // f_star / 2, CDF value at x_star
};

GlobalEntropyTables solve_x_star();

// Computed once, shared read-only.
const GlobalEntropyTables& global_entropy_tables();

// Inverse CDF of the maximum-entropy law; u must lie in (0, 1).
double global_entropy_inverse_cdf(double u, const GlobalEntropyTables& tables);

// mean + L z with z_k drawn independently from the 1-D maximum-entropy law.
Vector sample_global_entropy_gaussian(const Vector& mean, const CholeskyFactor& factor, Rng& rng);
Vector sample_global_entropy_gaussian(const Vector& mean, const Matrix& shape, Rng& rng);

// mean + L n with n standard normal.
Vector sample_gaussian(const Vector& mean, const CholeskyFactor& factor, Rng& rng);

// Draw from the density proportional to f. Gaussian, box and point
// functions only.
Vector sample_scaled(const PossibilityFunction& f, Rng& rng);

// Probability mass function over sample indices.
struct Pmf {
  std::vector<double> probabilities;
  std::optional<double> level;  // water level, local-entropy output only
  std::vector<bool> capped;     // W_i == w_i, local-entropy output only

  std::size_t size() const { return probabilities.size(); }
};

// W_i = w_i / sum_j w_j
Pmf pmf_scaled(std::span<const double> weights);

// Maximum-entropy PMF with sum_{i in B} W_i <= max_{i in B} w_i for every B.
Pmf pmf_global_entropy(std::span<const double> weights);

// Maximum-entropy PMF with W_i <= w_i, i.e. W_i = min(w_i, level) with
// sum_i W_i = 1.
Pmf pmf_local_entropy(std::span<const double> weights);

// Shannon entropy in nats.
double entropy(std::span<const double> probabilities);

// Inverse-CDF multinomial draws; one uniform per draw.
class PmfSampler {
public:
  explicit PmfSampler(std::span<const double> probabilities);

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

private:
  std::vector<double> cumulative_;
};

std::size_t sample_pmf(const Pmf& pmf, Rng& rng);

}  // namespace possmc
