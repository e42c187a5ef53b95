#include "finestrat/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "finestrat/csv.hpp"
#include "finestrat/error.hpp"

namespace finestrat {

FinitePopulation make_population(const PopulationConfig& cfg) {
  return std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GaussianPopConfig>) {
          return gaussian_population(c);
        } else {
          return hmt_population(c);
        }
      },
      cfg);
}

void SimScenario::validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (methods.empty()) throw ConfigError("scenario lists no methods");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (bandwidth && !(*bandwidth > 0.0)) throw ConfigError("bandwidth must be > 0");
  bayes.priors.validate();
  bayes.mcmc.validate();
}

const MethodSummary& SimResult::summary(Method m) const {
  for (const auto& s : summaries) {
    if (s.method == m) return s;
  }
  throw ConfigError("method '" + std::string(to_string(m)) + "' was not part of this run");
}

double metric_cp(std::span<const double> ht_values, std::span<const double> var_values, double truth_mean) {
  if (ht_values.size() != var_values.size()) throw ConfigError("coverage inputs differ in length");
  if (ht_values.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ht_values.size(); ++r) {
    if (var_values[r] < 0.0) throw ConfigError("negative variance estimate in coverage computation");
    hits += std::abs(ht_values[r] - truth_mean) <= 1.96 * std::sqrt(var_values[r]) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(ht_values.size());
}

double metric_ab(std::span<const double> var_values, double truth) {
  if (var_values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : var_values) sum += v - truth;
  return std::abs(sum / static_cast<double>(var_values.size()));
}

double metric_mae(std::span<const double> var_values, double truth) {
  if (var_values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : var_values) sum += std::abs(v - truth);
  return sum / static_cast<double>(var_values.size());
}

double metric_rmse(std::span<const double> var_values, double truth) {
  if (var_values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : var_values) sum += (v - truth) * (v - truth);
  return std::sqrt(sum / static_cast<double>(var_values.size()));
}

MonteCarloVariance scenario_truth(const FinitePopulation& pop, const SimScenario& sc) {
  const bool exact = sc.truth.mode == TruthMode::exact ||
                     (sc.truth.mode == TruthMode::automatic && sc.plan.kind == DesignKind::srswor);
  if (exact) {
    MonteCarloVariance t;
    t.variance = true_variance_exact_srswor(pop, sc.plan);
    t.mean = population_mean(pop);
    return t;
  }
  return true_variance_mc(pop, sc.plan, sc.truth.mc_draws, sc.seed);
}

namespace {

double estimate_one(Method m, const DrawnSample& s, const SimScenario& sc, const PseudoStrataMap& map,
                    const KernelWeights* kw, std::uint64_t mcmc_seed) {
  switch (m) {
    case Method::unbiased: return unbiased_variance(s).value;
    case Method::collapsed: return collapsed_variance(s, map).value;
    case Method::kernel:
      if (kw == nullptr) throw NumericalError("kernel weights unavailable");
      return kernel_variance(s, *kw).value;
    case Method::bayes:
    case Method::bayes_ignore_weights: {
      BayesOptions opt = sc.bayes;
      opt.mcmc.seed = mcmc_seed;
      opt.ignore_weights = m == Method::bayes_ignore_weights;
      return estimate_bayes(s, opt).estimate.value;
    }
  }
  throw ConfigError("unhandled method");
}

}  // namespace

SimResult run_replications(const SimScenario& sc) { return run_replications(sc, make_population(sc.population)); }

SimResult run_replications(const SimScenario& sc, const FinitePopulation& pop) {
  sc.validate();
  sc.plan.validate(pop);

  SimResult result;
  result.scenario = sc.name;
  result.methods = sc.methods;
  result.population_mean = population_mean(pop);
  const auto truth = scenario_truth(pop, sc);
  result.truth_variance = truth.variance;
  result.truth_std_error = truth.std_error;

  // The collapsing index and bandwidth are frame quantities: fixed across replications.
  const auto x = pop.indices();
  const auto map = make_pseudo_strata(x);
  std::optional<KernelWeights> kw;
  std::string kernel_error;
  const bool wants_kernel = std::find(sc.methods.begin(), sc.methods.end(), Method::kernel) != sc.methods.end();
  if (wants_kernel) {
    try {
      kw = kernel_weights(x, sc.bandwidth.value_or(default_bandwidth(x.size())));
    } catch (const NumericalError& e) {
      if (sc.abort_on_failure) throw;
      kernel_error = e.what();
    }
  }

  const auto reps = static_cast<std::size_t>(sc.replications);
  result.records.resize(reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&] {
    while (true) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps) return;
      auto& rec = result.records[r];
      rec.index = static_cast<int>(r);
      try {
        const std::uint64_t rep_seed = substream_seed(sc.seed, r);
        Rng rng(substream_seed(rep_seed, stream::sample));
        const auto sample = draw_sample(pop, sc.plan, rng);
        rec.ht = ht_mean(sample);
        const std::uint64_t mcmc_seed = substream_seed(rep_seed, stream::mcmc);
        for (auto m : sc.methods) {
          double v = std::numeric_limits<double>::quiet_NaN();
          std::string err;
          try {
            if (m == Method::kernel && !kw) throw NumericalError(kernel_error);
            v = estimate_one(m, sample, sc, map, kw ? &*kw : nullptr, mcmc_seed);
            if (!std::isfinite(v) || v < 0.0) throw NumericalError("non-finite or negative variance estimate");
          } catch (const std::exception& e) {
            if (sc.abort_on_failure) throw;
            err = std::string(to_string(m)) + ": " + e.what();
            v = std::numeric_limits<double>::quiet_NaN();
          }
          rec.estimates.push_back(v);
          rec.hits.push_back(std::isfinite(v) && std::abs(rec.ht - result.population_mean) <= 1.96 * std::sqrt(v));
          if (!err.empty()) rec.errors.push_back(std::move(err));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(reps);
        return;
      }
    }
  };

  const int threads = std::min<int>(sc.threads, static_cast<int>(reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  // Ordered reduction over replication index.
  for (std::size_t k = 0; k < sc.methods.size(); ++k) {
    std::vector<double> ht, var;
    MethodSummary s;
    s.method = sc.methods[k];
    for (const auto& rec : result.records) {
      if (std::isfinite(rec.estimates[k])) {
        ht.push_back(rec.ht);
        var.push_back(rec.estimates[k]);
      } else {
        ++s.failures;
      }
    }
    s.replications = static_cast<int>(var.size());
    s.ab = metric_ab(var, result.truth_variance);
    s.mae = metric_mae(var, result.truth_variance);
    s.rmse = metric_rmse(var, result.truth_variance);
    s.cp = metric_cp(ht, var, result.population_mean);
    result.summaries.push_back(s);
  }
  return result;
}

AblationResult weight_ablation(const SimScenario& sc) {
  const auto pop = make_population(sc.population);
  SimScenario weighted = sc;
  weighted.methods = {Method::bayes};
  SimScenario ignored = sc;
  ignored.methods = {Method::bayes_ignore_weights};
  return {run_replications(weighted, pop), run_replications(ignored, pop)};
}

void write_results_header(std::ostream& out, bool with_runtime) {
  out << "scenario,method,AB,MAE,RMSE,CP,R,failures,truth_variance";
  if (with_runtime) out << ",runtime_seconds";
  out << '\n';
}

void write_results_rows(std::ostream& out, const SimResult& r, std::optional<double> runtime_seconds) {
  for (const auto& s : r.summaries) {
    out << r.scenario << ',' << to_string(s.method) << ',' << csv::format_double(s.ab) << ','
        << csv::format_double(s.mae) << ',' << csv::format_double(s.rmse) << ',' << csv::format_double(s.cp) << ','
        << s.replications << ',' << s.failures << ',' << csv::format_double(r.truth_variance);
    if (runtime_seconds) out << ',' << csv::format_double(*runtime_seconds);
    out << '\n';
  }
}

void write_replications_csv(std::ostream& out, const SimResult& r, bool header) {
  if (header) out << "scenario,replication,ht,method,variance,hit\n";
  for (const auto& rec : r.records) {
    for (std::size_t k = 0; k < r.methods.size(); ++k) {
      out << r.scenario << ',' << rec.index << ',' << csv::format_double(rec.ht) << ','
          << to_string(r.methods[k]) << ',' << csv::format_double(rec.estimates[k]) << ','
          << int(rec.hits[k]) << '\n';
    }
  }
}

void write_plot_data_csv(std::ostream& out, const SimResult& r, bool header) {
  if (header) out << "method,replication,variance,truth\n";
  for (std::size_t k = 0; k < r.methods.size(); ++k) {
    for (const auto& rec : r.records) {
      out << to_string(r.methods[k]) << ',' << rec.index << ',' << csv::format_double(rec.estimates[k]) << ','
          << csv::format_double(r.truth_variance) << '\n';
    }
  }
}

}  // namespace finestrat
