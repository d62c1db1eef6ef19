#include "possmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "possmc/single_filter.hpp"

namespace possmc {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("CSV column missing: " + name);
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV file " + path.string());
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line, ','));
    if (t.rows.back().size() != t.header.size()) throw Error("ragged CSV row in " + path.string());
  }
  return t;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

ScenarioId parse_scenario(const std::string& text) {
  const std::string t = trim(text);
  if (t == "1") return ScenarioId::One;
  if (t == "2") return ScenarioId::Two;
  if (t == "disk" || t == "3") return ScenarioId::Disk;
  throw InvalidArgument("unknown scenario '" + text + "' (expected 1, 2 or disk)");
}

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::One: return "1";
    case ScenarioId::Two: return "2";
    case ScenarioId::Disk: return "disk";
  }
  return "?";
}

Scenario::Scenario(ScenarioId id, Model model)
    : id_(id),
      model_(std::move(model)),
      kernels_(std::visit([](const auto& m) { return model_kernels(m); }, model_)) {
  if (const auto* lin = std::get_if<LinearGaussianModel>(&model_)) {
    positions_ = lin->position_indices();
  } else if (const auto* st = std::get_if<StudentTModel>(&model_)) {
    positions_ = st->base.position_indices();
  } else {
    positions_ = {0};
    angular_ = {0};
  }
}

Scenario Scenario::make(ScenarioId id, const ScenarioOverrides& o) {
  auto apply_linear = [&](LinearGaussianModel& m) {
    if (o.dt) m.dt = *o.dt;
    if (o.horizon) m.horizon = *o.horizon;
    if (o.sigma) m.sigma = *o.sigma;
    if (o.varsigma) m.varsigma = *o.varsigma;
    if (o.prior_variance) {
      m.initial_variance = *o.prior_variance * Matrix::Identity(m.state_dim(), m.state_dim());
    }
    if (!(m.dt > 0.0)) throw InvalidArgument("time step must be > 0");
    if (m.horizon < 1) throw InvalidArgument("horizon must be >= 1");
  };
  switch (id) {
    case ScenarioId::One: {
      auto m = LinearGaussianModel::scenario1();
      apply_linear(m);
      return Scenario(id, m);
    }
    case ScenarioId::Two: {
      auto m = StudentTModel::scenario2();
      apply_linear(m.base);
      if (o.nu) m.nu = *o.nu;
      if (o.nu_obs) m.nu_obs = *o.nu_obs;
      if (!(m.nu > 2.0) || !(m.nu_obs > 2.0)) throw InvalidArgument("nu must be > 2");
      return Scenario(id, m);
    }
    case ScenarioId::Disk: {
      SpinningDiskModel m;
      if (o.dt) m.dt = *o.dt;
      if (o.horizon) m.horizon = *o.horizon;
      if (o.sigma) m.accel_std = *o.sigma;
      if (o.varsigma) m.obs_std = *o.varsigma;
      if (o.prior_angle_std) m.prior_angle_std = *o.prior_angle_std;
      if (o.prior_speed_std) m.prior_speed_std = *o.prior_speed_std;
      if (o.prior_speed) m.prior_speed = *o.prior_speed;
      if (!(m.dt > 0.0)) throw InvalidArgument("time step must be > 0");
      if (m.horizon < 1) throw InvalidArgument("horizon must be >= 1");
      return Scenario(id, m);
    }
  }
  throw InvalidArgument("unknown scenario");
}

int Scenario::horizon() const {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, StudentTModel>) {
          return m.base.horizon;
        } else {
          return m.horizon;
        }
      },
      model_);
}

Trajectory Scenario::simulate(Rng& rng) const {
  return std::visit([&](const auto& m) { return possmc::simulate(m, rng); }, model_);
}

std::vector<WeightedPossibility> Scenario::possibility_prior() const {
  if (const auto* st = std::get_if<StudentTModel>(&model_)) return possmc::possibility_prior(st->base);
  if (const auto* lin = std::get_if<LinearGaussianModel>(&model_)) return possmc::possibility_prior(*lin);
  return possmc::possibility_prior(std::get<SpinningDiskModel>(model_));
}

std::vector<GaussianTerm> Scenario::probability_prior() const {
  if (const auto* st = std::get_if<StudentTModel>(&model_)) return possmc::probability_prior(st->base);
  if (const auto* lin = std::get_if<LinearGaussianModel>(&model_)) return possmc::probability_prior(*lin);
  return possmc::probability_prior(std::get<SpinningDiskModel>(model_));
}

std::string FilterSpec::name() const {
  if (model == ModelKind::Probabilistic) return "pr:" + to_string(cfg.complexity);
  return "po:" + to_string(cfg.continuous) + ":" + to_string(cfg.discrete) + ":" +
         to_string(cfg.complexity) + ":" + to_string(cfg.resampling);
}

FilterSpec FilterSpec::parse(const std::string& text) {
  const auto parts = split(trim(text), ':');
  auto complexity = [&](const std::string& s) {
    if (s == "linear" || s == "n") return Complexity::Linear;
    if (s == "quadratic" || s == "n2") return Complexity::Quadratic;
    throw InvalidArgument("bad complexity '" + s + "' in filter spec " + text);
  };
  FilterSpec spec;
  if (parts.size() == 2 && parts[0] == "pr") {
    spec.model = ModelKind::Probabilistic;
    spec.cfg.complexity = complexity(parts[1]);
    return spec;
  }
  if (parts.size() != 5 || parts[0] != "po") {
    throw InvalidArgument("bad filter spec '" + text + "'");
  }
  spec.model = ModelKind::Possibilistic;
  if (parts[1] == "scaled") {
    spec.cfg.continuous = ContinuousSampler::Scaled;
  } else if (parts[1] == "global") {
    spec.cfg.continuous = ContinuousSampler::Global;
  } else {
    throw InvalidArgument("bad continuous sampler in filter spec " + text);
  }
  if (parts[2] == "scaled") {
    spec.cfg.discrete = DiscretePmf::Scaled;
  } else if (parts[2] == "global") {
    spec.cfg.discrete = DiscretePmf::Global;
  } else if (parts[2] == "local") {
    spec.cfg.discrete = DiscretePmf::Local;
  } else {
    throw InvalidArgument("bad discrete PMF in filter spec " + text);
  }
  spec.cfg.complexity = complexity(parts[3]);
  if (parts[4] == "all") {
    spec.cfg.resampling = ResamplingMode::All;
  } else if (parts[4] == "selective" || parts[4] == "select") {
    spec.cfg.resampling = ResamplingMode::Selective;
  } else {
    throw InvalidArgument("bad resampling mode in filter spec " + text);
  }
  return spec;
}

std::vector<FilterSpec> parse_filter_list(const std::string& text, ScenarioId scenario) {
  std::vector<std::string> names;
  if (trim(text) == "all") {
    if (scenario == ScenarioId::Disk) {
      names = {"pr:quadratic", "po:global:local:quadratic:selective"};
    } else {
      for (const char* c : {"linear", "quadratic"}) {
        const std::string k = c;
        names.push_back("pr:" + k);
        names.push_back("po:scaled:scaled:" + k + ":selective");
        names.push_back("po:global:global:" + k + ":selective");
        names.push_back("po:global:global:" + k + ":all");
        names.push_back("po:global:local:" + k + ":selective");
        names.push_back("po:global:local:" + k + ":all");
      }
    }
  } else {
    for (const auto& p : split(text, ',')) {
      if (!trim(p).empty()) names.push_back(trim(p));
    }
  }
  if (names.empty()) throw InvalidArgument("empty filter list");
  std::vector<FilterSpec> specs;
  for (const auto& n : names) specs.push_back(FilterSpec::parse(n));
  return specs;
}

std::uint64_t filter_stream_id(const FilterSpec& spec) {
  const std::uint64_t h = fnv1a(spec.name());
  return h == kTrajectoryStream ? 1 : h;
}

std::uint64_t derive_run_seed(std::uint64_t master, std::uint64_t scenario, std::uint64_t filter,
                              std::uint64_t budget, std::uint64_t run) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t field : {scenario, filter, budget, run}) h = splitmix64(h ^ splitmix64(field));
  return h;
}

double RunResult::total_rmse() const {
  double total = 0.0;
  for (double e : squared_errors) total += std::sqrt(e);
  return total;
}

double squared_position_error(const Vector& estimate, const Vector& truth,
                              std::span<const int> positions, std::span<const int> angular) {
  double sum = 0.0;
  for (int p : positions) {
    double e = estimate[p] - truth[p];
    if (std::find(angular.begin(), angular.end(), p) != angular.end()) e = wrap_angle(e);
    sum += e * e;
  }
  return sum;
}

RunResult run_filter(const Scenario& scenario, const FilterSpec& spec, std::size_t budget,
                     const Trajectory& trajectory, std::uint64_t seed) {
  RunResult result;
  result.seed = seed;
  result.trajectory_hash = trajectory.hash();
  result.truths = trajectory.states;
  Rng rng(seed);
  FilterConfig cfg = spec.cfg;
  cfg.samples = budget;
  cfg.validate();
  const auto& k = scenario.kernels();
  const auto start = std::chrono::steady_clock::now();

  try {
    if (spec.model == ModelKind::Probabilistic) {
      const ParticleModel model{k.transition, k.observation};
      ParticleState state =
          initialize_particles(scenario.probability_prior(), budget, rng, &k.transition);
      for (const auto& y : trajectory.observations) {
        ParticleStep step = particle_filter_step(state, model, y, rng);
        result.estimates.push_back(particle_map(step.previous, step.weighted, model, y, cfg.complexity));
        state = std::move(step.resampled);
      }
    } else if (scenario.id() == ScenarioId::Disk) {
      const auto likelihood = single_likelihood(k.observation);
      const GaussianKernel& wrapper = k.transition;
      MultiPossibilityState state =
          approximate_opm(scenario.possibility_prior(), budget, rng, cfg,
                          [&wrapper](Vector x) { return wrapper.wrap(std::move(x)); });
      for (const auto& y : trajectory.observations) {
        state = multi_predict(state, k.transition, cfg, rng);
        state = multi_update(state, likelihood, y, rng);
        result.estimates.push_back(map_multi(state));
        state = multi_resample(state, budget, cfg, rng);
      }
    } else {
      const auto prior = scenario.possibility_prior();
      SinglePossibilityState state = initialize_single(prior.front().function, cfg, rng);
      for (const auto& y : trajectory.observations) {
        state = single_predict(state, k.transition, cfg, rng);
        state = single_update(state, k.observation, y);
        result.estimates.push_back(map_single(state));
        state = resample_single(state, cfg, rng);
      }
    }
  } catch (const DegenerateWeights& e) {
    result.failed = true;
    result.failure = e.what();
  }
  result.duration_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!result.failed) {
    for (std::size_t t = 0; t < result.estimates.size(); ++t) {
      result.squared_errors.push_back(squared_position_error(
          result.estimates[t], result.truths[t], scenario.positions(), scenario.angular()));
    }
  }
  return result;
}

AggregateResult rmse_total(std::span<const RunResult> results, std::span<const int> positions,
                           std::span<const int> angular) {
  if (results.empty()) throw InvalidArgument("rmse_total: no runs");
  AggregateResult agg;
  agg.runs = results.size();
  std::size_t horizon = 0;
  bool have = false;
  std::vector<double> totals;
  double duration = 0.0;
  for (const auto& r : results) {
    duration += r.duration_s;
    if (r.failed) {
      ++agg.failed;
      continue;
    }
    if (r.estimates.size() != r.truths.size()) throw InvalidArgument("rmse_total: length mismatch");
    if (!have) {
      horizon = r.truths.size();
      agg.rmse_curve.assign(horizon, 0.0);
      have = true;
    } else if (r.truths.size() != horizon) {
      throw InvalidArgument("rmse_total: runs have different horizons");
    }
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const double e2 = squared_position_error(r.estimates[t], r.truths[t], positions, angular);
      agg.rmse_curve[t] += e2;
      total += std::sqrt(e2);
    }
    totals.push_back(total);
  }
  agg.mean_duration_s = duration / static_cast<double>(results.size());
  if (totals.empty()) {
    agg.total_rmse = std::nan("");
    agg.mean_total_rmse = std::nan("");
    agg.stderr_total = std::nan("");
    return agg;
  }
  const double n = static_cast<double>(totals.size());
  for (double& v : agg.rmse_curve) {
    v = std::sqrt(v / n);
    agg.total_rmse += v;
  }
  double mean = 0.0;
  for (double v : totals) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : totals) var += (v - mean) * (v - mean);
  agg.mean_total_rmse = mean;
  agg.stderr_total = totals.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return agg;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw InvalidArgument("run count must be >= 1");
  if (filters.empty()) throw InvalidArgument("no filters selected");
  if (budgets.empty()) throw InvalidArgument("no sample budgets selected");
  for (auto n : budgets) {
    if (n < 1) throw InvalidArgument("sample budgets must be >= 1");
  }
  if (workers < 1) throw InvalidArgument("worker count must be >= 1");
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Scenario scenario = Scenario::make(cfg.scenario, cfg.overrides);
  const auto scenario_key = static_cast<std::uint64_t>(cfg.scenario);

  struct Task {
    std::size_t filter;
    std::size_t budget;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < cfg.filters.size(); ++f) {
    for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
      for (std::size_t r = 0; r < cfg.runs; ++r) tasks.push_back({f, b, cfg.first_run + r});
    }
  }

  std::vector<RunResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      Rng traj_rng(derive_run_seed(cfg.seed, scenario_key, kTrajectoryStream, 0, task.run));
      const Trajectory traj = scenario.simulate(traj_rng);
      const auto& spec = cfg.filters[task.filter];
      const std::size_t n = cfg.budgets[task.budget];
      const auto seed = derive_run_seed(cfg.seed, scenario_key, filter_stream_id(spec), n, task.run);
      results[i] = run_filter(scenario, spec, n, traj, seed);
      if (!cfg.record_timing) results[i].duration_s = 0.0;
    }
  };
  const unsigned pool = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(tasks.size())));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < pool; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  ExperimentOutput out;
  std::size_t cursor = 0;
  for (std::size_t f = 0; f < cfg.filters.size(); ++f) {
    for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
      std::vector<RunResult> cell;
      for (std::size_t r = 0; r < cfg.runs; ++r, ++cursor) {
        out.runs.push_back({cfg.filters[f].name(), cfg.budgets[b], tasks[cursor].run, results[cursor]});
        cell.push_back(results[cursor]);
      }
      AggregateResult agg = rmse_total(cell, scenario.positions(), scenario.angular());
      agg.filter = cfg.filters[f].name();
      agg.budget = cfg.budgets[b];
      out.aggregates.push_back(std::move(agg));
    }
  }
  if (!cfg.out_dir.empty()) write_experiment_csv(cfg, out);
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_experiment_csv(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  const std::string sc = to_string(cfg.scenario);

  auto runs = open_out(dir / "runs.csv");
  runs << "scenario,filter,N,run,seed,total_rmse,duration_s,failed,trajectory_hash\n";
  for (const auto& r : out.runs) {
    runs << sc << ',' << r.filter << ',' << r.budget << ',' << r.run << ',' << r.result.seed << ','
         << format_double(r.result.failed ? std::nan("") : r.result.total_rmse()) << ','
         << format_double(r.result.duration_s) << ',' << (r.result.failed ? 1 : 0) << ','
         << r.result.trajectory_hash << '\n';
  }

  auto agg = open_out(dir / "aggregate.csv");
  agg << "scenario,filter,N,runs,mean_total_rmse,stderr,mean_duration_s,failed,total_rmse\n";
  for (const auto& a : out.aggregates) {
    agg << sc << ',' << a.filter << ',' << a.budget << ',' << a.runs << ','
        << format_double(a.mean_total_rmse) << ',' << format_double(a.stderr_total) << ','
        << format_double(a.mean_duration_s) << ',' << a.failed << ',' << format_double(a.total_rmse)
        << '\n';
  }

  auto curves = open_out(dir / "curves.csv");
  curves << "scenario,filter,N,t,rmse\n";
  for (const auto& a : out.aggregates) {
    for (std::size_t t = 0; t < a.rmse_curve.size(); ++t) {
      curves << sc << ',' << a.filter << ',' << a.budget << ',' << (t + 1) << ','
             << format_double(a.rmse_curve[t]) << '\n';
    }
  }
}

std::string format_table(const std::string& dir_name) {
  const std::filesystem::path dir(dir_name);
  const CsvTable t = read_csv(dir / "aggregate.csv");
  const auto c_filter = t.column("filter");
  const auto c_n = t.column("N");
  const auto c_total = t.column("total_rmse");
  const auto c_time = t.column("mean_duration_s");

  std::vector<std::string> filters;
  std::vector<std::size_t> budgets;
  std::map<std::pair<std::string, std::size_t>, std::pair<double, double>> cells;
  for (const auto& row : t.rows) {
    const std::size_t n = std::stoul(row[c_n]);
    if (std::find(filters.begin(), filters.end(), row[c_filter]) == filters.end()) {
      filters.push_back(row[c_filter]);
    }
    if (std::find(budgets.begin(), budgets.end(), n) == budgets.end()) budgets.push_back(n);
    cells[{row[c_filter], n}] = {std::stod(row[c_total]), std::stod(row[c_time])};
  }

  auto csv = open_out(dir / "table.csv");
  csv << "filter";
  for (auto n : budgets) csv << ",N=" << n << ",time_N=" << n;
  csv << '\n';

  std::size_t width = 6;
  for (const auto& f : filters) width = std::max(width, f.size());
  std::ostringstream text;
  text << std::left << std::setw(static_cast<int>(width)) << "filter";
  for (auto n : budgets) text << "  " << std::right << std::setw(18) << ("N = " + std::to_string(n));
  text << '\n';
  for (const auto& f : filters) {
    text << std::left << std::setw(static_cast<int>(width)) << f;
    csv << f;
    for (auto n : budgets) {
      const auto it = cells.find({f, n});
      std::string cell = "-";
      if (it != cells.end()) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(2) << it->second.first << " (" << it->second.second << ")";
        cell = c.str();
        csv << ',' << format_double(it->second.first) << ',' << format_double(it->second.second);
      } else {
        csv << ",,";
      }
      text << "  " << std::right << std::setw(18) << cell;
    }
    text << '\n';
    csv << '\n';
  }
  return text.str();
}

std::string format_curves(const std::string& dir_name) {
  const std::filesystem::path dir(dir_name);
  const CsvTable t = read_csv(dir / "curves.csv");
  const auto c_filter = t.column("filter");
  const auto c_n = t.column("N");
  const auto c_t = t.column("t");
  const auto c_rmse = t.column("rmse");

  std::vector<std::string> series;
  std::map<std::string, std::map<std::size_t, std::string>> values;
  std::size_t horizon = 0;
  for (const auto& row : t.rows) {
    const std::string key = row[c_filter] + "@" + row[c_n];
    if (std::find(series.begin(), series.end(), key) == series.end()) series.push_back(key);
    const std::size_t step = std::stoul(row[c_t]);
    horizon = std::max(horizon, step);
    values[key][step] = row[c_rmse];
  }
  std::ostringstream out;
  out << 't';
  for (const auto& s : series) out << ',' << s;
  out << '\n';
  for (std::size_t step = 1; step <= horizon; ++step) {
    out << step;
    for (const auto& s : series) {
      const auto it = values[s].find(step);
      out << ',' << (it == values[s].end() ? "" : it->second);
    }
    out << '\n';
  }
  auto file = open_out(dir / "curve_wide.csv");
  file << out.str();
  return out.str();
}

}  // namespace possmc
