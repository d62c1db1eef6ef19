#include "possmc/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "possmc/entropy.hpp"
#include "possmc/gaussian_oracles.hpp"
#include "possmc/harness.hpp"

namespace possmc {

namespace {

struct Check {
  std::string name;
  std::function<bool()> body;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int run_selftest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"x_star root",
       [] {
         const auto& t = global_entropy_tables();
         const double x = t.x_star;
         return x < 0.0 && near(std::exp(-0.5 * x * x) * (x * x + 1.0), 1.0, 1e-12) &&
                near(t.f_star, 1.0 / (x * x + 1.0), 1e-12);
       }},
      {"inverse cdf monotone",
       [] {
         const auto& t = global_entropy_tables();
         double prev = -INFINITY;
         for (int i = 1; i < 1000; ++i) {
           const double x = global_entropy_inverse_cdf(i / 1000.0, t);
           if (!(x > prev)) return false;
           prev = x;
         }
         return true;
       }},
      {"local entropy pmf caps at level",
       [] {
         const std::vector<double> w = {1.0, 0.5, 0.2, 0.05};
         const Pmf p = pmf_local_entropy(w);
         double s = 0.0;
         for (std::size_t i = 0; i < w.size(); ++i) {
           if (p.probabilities[i] > w[i] + 1e-12) return false;
           s += p.probabilities[i];
         }
         return near(s, 1.0, 1e-12);
       }},
      {"global entropy pmf sums to one",
       [] {
         const std::vector<double> w = {0.3, 1.0, 0.7, 0.1, 0.9};
         const Pmf p = pmf_global_entropy(w);
         double s = 0.0;
         for (double v : p.probabilities) s += v;
         return near(s, 1.0, 1e-12);
       }},
      {"kalman and possibility routes agree",
       [] {
         Matrix F(2, 2), Q(2, 2), H(1, 2), R(1, 1);
         F << 1.0, 0.1, 0.0, 1.0;
         Q << 0.01, 0.002, 0.002, 0.04;
         H << 1.0, 0.0;
         R << 0.25;
         GaussianBelief b{Vector::Zero(2), Matrix::Identity(2, 2)};
         Vector y(1);
         y << 0.7;
         const auto k = kalman_step(b, F, Q, H, R, y);
         const auto g = gaussian_possibility_step(b, F, Q, H, R, y);
         return (k.mean - g.mean).norm() < 1e-10 && (k.cov - g.cov).norm() < 1e-10;
       }},
      {"scenario 1 single run finite",
       [] {
         ScenarioOverrides o;
         o.horizon = 5;
         const Scenario s = Scenario::make(ScenarioId::One, o);
         Rng rng(7);
         const Trajectory traj = s.simulate(rng);
         const auto r = run_filter(s, FilterSpec::parse("po:global:local:quadratic:selective"), 64,
                                   traj, 11);
         return !r.failed && std::isfinite(r.total_rmse());
       }},
  };

  int failures = 0;
  for (const auto& c : checks) {
    bool ok = false;
    std::string why;
    try {
      ok = c.body();
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << why << '\n';
    if (!ok) ++failures;
  }
  return failures;
}

}  // namespace possmc
