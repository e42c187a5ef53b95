#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "finestrat/bayes.hpp"
#include "finestrat/design.hpp"
#include "finestrat/estimators.hpp"
#include "finestrat/population.hpp"

namespace finestrat {

using PopulationConfig = std::variant<GaussianPopConfig, HmtPopConfig>;

FinitePopulation make_population(const PopulationConfig& cfg);

enum class TruthMode { automatic, exact, monte_carlo };

struct TruthOracle {
  TruthMode mode = TruthMode::automatic;  // exact for srswor, Monte Carlo otherwise
  std::size_t mc_draws = 100000;
};

struct SimScenario {
  std::string name = "scenario";
  PopulationConfig population = GaussianPopConfig{};
  SamplingPlan plan;
  std::vector<Method> methods{Method::collapsed, Method::kernel, Method::bayes};
  int replications = 200;
  std::optional<double> bandwidth;  // default: midpoint of (1/H, 2/H)
  BayesOptions bayes;               // spline, priors, MCMC (its seed is replaced per replication)
  std::uint64_t seed = 1;           // base seed for sampling and MCMC streams
  TruthOracle truth;
  int threads = 1;
  //! Rethrow the first per-replication failure instead of recording it.
  bool abort_on_failure = false;

  void validate() const;
};

struct MethodSummary {
  Method method = Method::collapsed;
  double ab = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  double cp = 0.0;
  int replications = 0;  // successful
  int failures = 0;
};

struct ReplicationRecord {
  int index = 0;
  double ht = 0.0;
  std::vector<double> estimates;  // per scenario method; NaN when the method failed
  std::vector<std::uint8_t> hits;
  std::vector<std::string> errors;
};

struct SimResult {
  std::string scenario;
  std::vector<Method> methods;
  std::vector<MethodSummary> summaries;
  double truth_variance = 0.0;
  double truth_std_error = 0.0;  // 0 for the exact oracle
  double population_mean = 0.0;
  std::vector<ReplicationRecord> records;

  const MethodSummary& summary(Method m) const;
};

//! Fraction of replications with |ht - truth_mean| <= 1.96 sqrt(var).
double metric_cp(std::span<const double> ht_values, std::span<const double> var_values, double truth_mean);

//! |mean(var - truth)|.
double metric_ab(std::span<const double> var_values, double truth);

//! mean(|var - truth|).
double metric_mae(std::span<const double> var_values, double truth);

//! sqrt(mean((var - truth)^2)).
double metric_rmse(std::span<const double> var_values, double truth);

//! Population truth for a scenario: exact srswor formula or Monte Carlo.
MonteCarloVariance scenario_truth(const FinitePopulation& pop, const SimScenario& sc);

//! Fixed finite population, repeated design draws on per-replication
//! substreams, every requested estimator per draw, ordered reduction.
SimResult run_replications(const SimScenario& sc);

//! Same as run_replications on a caller-supplied population.
SimResult run_replications(const SimScenario& sc, const FinitePopulation& pop);

struct AblationResult {
  SimResult weighted;
  SimResult ignored;
};

//! Bayes with normalized weights vs unit weights on identical samples and MCMC streams.
AblationResult weight_ablation(const SimScenario& sc);

// Results CSV: scenario,method,AB,MAE,RMSE,CP,R,failures,truth_variance[,runtime_seconds]
void write_results_header(std::ostream& out, bool with_runtime);
void write_results_rows(std::ostream& out, const SimResult& r, std::optional<double> runtime_seconds = {});

// Per-replication CSV: scenario,replication,ht,method,variance,hit
void write_replications_csv(std::ostream& out, const SimResult& r, bool header = true);

// Plot data CSV: method,replication,variance,truth
void write_plot_data_csv(std::ostream& out, const SimResult& r, bool header = true);

}  // namespace finestrat
