#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "finestrat/population.hpp"
#include "finestrat/rng.hpp"

namespace finestrat {

enum class DesignKind { srswor, pps_systematic };

std::string_view to_string(DesignKind kind) noexcept;
DesignKind parse_design_kind(std::string_view name);

struct SamplingPlan {
  DesignKind kind = DesignKind::srswor;
  //! One entry applies to every stratum; otherwise one entry per stratum.
  std::vector<int> n_per_stratum{1};

  static SamplingPlan uniform(DesignKind kind, int n) { return SamplingPlan{kind, {n}}; }
  int n_for(std::size_t h) const;
  //! Throws ConfigError unless 1 <= n_h <= N_h for every stratum.
  void validate(const FinitePopulation& pop) const;
};

struct SampledStratum {
  int id = 0;
  double x = 0.0;
  std::size_t population_size = 0;  // N_h
  std::vector<std::size_t> units;   // 0-based frame positions
  std::vector<double> y;
  std::vector<double> pi;

  std::size_t count() const noexcept { return y.size(); }
  //! HT estimate of the stratum total, sum y / pi.
  double ht_total() const noexcept;
};

struct DrawnSample {
  DesignKind kind = DesignKind::srswor;
  std::vector<SampledStratum> strata;
  std::size_t population_size = 0;  // N

  std::size_t num_strata() const noexcept { return strata.size(); }
  std::size_t sample_size() const noexcept;
  std::size_t max_stratum_sample() const noexcept;
  std::vector<double> indices() const;
};

//! Normalized likelihood weights, one vector per sampled stratum.
struct NormalizedWeights {
  std::vector<std::vector<double>> per_stratum;

  double mean() const noexcept;
  static NormalizedWeights ones(const DrawnSample& s);
};

DrawnSample draw_srswor(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng);
DrawnSample draw_pps_systematic(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng);
DrawnSample draw_sample(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng);

//! First-order inclusion probabilities of every unit in stratum h under `plan`.
std::vector<double> inclusion_probabilities(const FinitePopulation& pop, const SamplingPlan& plan,
                                            std::size_t h);

//! w_hj proportional to 1/pi_hj with global mean exactly one.
NormalizedWeights normalized_weights(const DrawnSample& s);

//! Exact V(ybar_HT) under srswor.
double true_variance_exact_srswor(const FinitePopulation& pop, const SamplingPlan& plan);

//! Exact V(ybar_HT) for pps with one unit per stratum, where systematic
//! selection reduces to a single pps draw.
double true_variance_exact_pps_single(const FinitePopulation& pop);

struct MonteCarloVariance {
  double variance = 0.0;
  double std_error = 0.0;  // MC standard error of `variance`
  double mean = 0.0;       // MC average of ybar_HT
  std::size_t draws = 0;
};

MonteCarloVariance true_variance_mc(const FinitePopulation& pop, const SamplingPlan& plan,
                                    std::size_t draws, std::uint64_t seed);

// CSV: stratum_id,unit_id,y,pi,x_stratum  (+ "# population_size=N" metadata)
void write_sample_csv(std::ostream& out, const DrawnSample& s,
                      const std::vector<std::string>& comments = {});
DrawnSample read_sample_csv(std::istream& in, DesignKind kind = DesignKind::srswor);

}  // namespace finestrat
