#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "possmc/filter_config.hpp"
#include "possmc/scenarios.hpp"

namespace possmc {

enum class ScenarioId { One = 1, Two = 2, Disk = 3 };

ScenarioId parse_scenario(const std::string& text);
std::string to_string(ScenarioId id);

// Values left unset keep the scenario defaults.
struct ScenarioOverrides {
  std::optional<double> dt;
  std::optional<int> horizon;
  std::optional<double> sigma;
  std::optional<double> varsigma;
  std::optional<double> nu;
  std::optional<double> nu_obs;
  std::optional<double> prior_variance;  // linear scenarios, multiplies I
  std::optional<double> prior_angle_std;
  std::optional<double> prior_speed_std;
  std::optional<double> prior_speed;
};

class Scenario {
public:
  using Model = std::variant<LinearGaussianModel, StudentTModel, SpinningDiskModel>;

  static Scenario make(ScenarioId id, const ScenarioOverrides& overrides = {});

  ScenarioId id() const { return id_; }
  const Model& model() const { return model_; }
  const ModelKernels& kernels() const { return kernels_; }
  int horizon() const;
  const std::vector<int>& positions() const { return positions_; }
  const std::vector<int>& angular() const { return angular_; }

  Trajectory simulate(Rng& rng) const;
  std::vector<WeightedPossibility> possibility_prior() const;
  std::vector<GaussianTerm> probability_prior() const;

private:
  Scenario(ScenarioId id, Model model);

  ScenarioId id_;
  Model model_;
  ModelKernels kernels_;
  std::vector<int> positions_;
  std::vector<int> angular_;
};

enum class ModelKind { Probabilistic, Possibilistic };

// A filter variant: particle filter (linear or quadratic MAP) or possibility
// filter with its sampling choices. Text form:
//   pr:<linear|quadratic>
//   po:<scaled|global>:<scaled|global|local>:<linear|quadratic>:<all|selective>
struct FilterSpec {
  ModelKind model = ModelKind::Possibilistic;
  FilterConfig cfg;

  std::string name() const;
  static FilterSpec parse(const std::string& text);
};

// Comma-separated list or "all" (the benchmark rows for the scenario).
std::vector<FilterSpec> parse_filter_list(const std::string& text, ScenarioId scenario);

// Stable identifier of a filter spec, independent of its position in a list.
std::uint64_t filter_stream_id(const FilterSpec& spec);

// Stream id reserved for trajectory simulation.
inline constexpr std::uint64_t kTrajectoryStream = 0;

// splitmix64 avalanche chained over every field.
std::uint64_t derive_run_seed(std::uint64_t master, std::uint64_t scenario, std::uint64_t filter,
                              std::uint64_t budget, std::uint64_t run);

struct RunResult {
  std::vector<Vector> estimates;
  std::vector<Vector> truths;
  std::vector<double> squared_errors;  // position error per step
  double duration_s = 0.0;
  bool failed = false;
  std::string failure;
  std::uint64_t seed = 0;
  std::uint64_t trajectory_hash = 0;

  // sum_t |e_t|
  double total_rmse() const;
};

double squared_position_error(const Vector& estimate, const Vector& truth,
                              std::span<const int> positions, std::span<const int> angular = {});

// Runs one filter over one trajectory. Degenerate weights mark the run failed.
RunResult run_filter(const Scenario& scenario, const FilterSpec& spec, std::size_t budget,
                     const Trajectory& trajectory, std::uint64_t seed);

struct AggregateResult {
  std::string filter;
  std::size_t budget = 0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::vector<double> rmse_curve;  // sqrt(mean over runs of squared error) per step
  double total_rmse = 0.0;         // sum of rmse_curve
  double mean_total_rmse = 0.0;    // mean of per-run totals
  double stderr_total = 0.0;
  double mean_duration_s = 0.0;
};

// Failed runs are counted and excluded.
AggregateResult rmse_total(std::span<const RunResult> results, std::span<const int> positions,
                           std::span<const int> angular = {});

struct ExperimentConfig {
  ScenarioId scenario = ScenarioId::One;
  ScenarioOverrides overrides;
  std::vector<FilterSpec> filters;
  std::vector<std::size_t> budgets;
  std::size_t runs = 1;
  std::size_t first_run = 0;
  std::uint64_t seed = 0;
  std::string out_dir;  // empty: no files
  unsigned workers = 1;
  bool record_timing = false;

  void validate() const;
};

struct RunRecord {
  std::string filter;
  std::size_t budget = 0;
  std::size_t run = 0;
  RunResult result;
};

struct ExperimentOutput {
  std::vector<RunRecord> runs;  // ordered by filter, budget, run
  std::vector<AggregateResult> aggregates;
};

// Every (filter, budget) cell sees the same trajectory for a given run index.
// Output is independent of the worker count.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Writes runs.csv, aggregate.csv and curves.csv into the directory.
void write_experiment_csv(const ExperimentConfig& cfg, const ExperimentOutput& out);

std::string format_double(double v);

// Table-shaped summary of aggregate.csv (rows: filters, columns: budgets).
// Returns the aligned text and writes table.csv next to the input.
std::string format_table(const std::string& dir);

// Per-step RMSE from curves.csv in wide form (one column per filter and
// budget). Returns the CSV text and writes curve_wide.csv.
std::string format_curves(const std::string& dir);

}  // namespace possmc
