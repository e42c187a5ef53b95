#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace finestrat {

//! One stratum of a finite population.
struct Stratum {
  int id = 0;               // 1-based
  double x = 0.0;           // collapsing index x_h
  std::vector<double> y;    // unit values, frame order
  std::vector<double> x_unit;  // per-unit index (equals x for stratum-level covariates)
  std::vector<double> size;    // per-unit size measure; empty when absent

  std::size_t count() const noexcept { return y.size(); }
  bool has_sizes() const noexcept { return !size.empty(); }
  double total() const noexcept;
  //! Population variance with divisor N_h - 1 (0 for singletons).
  double variance() const noexcept;
};

class FinitePopulation {
public:
  FinitePopulation() = default;
  //! Validates invariants; throws ConfigError on violation.
  explicit FinitePopulation(std::vector<Stratum> strata);

  std::span<const Stratum> strata() const noexcept { return strata_; }
  const Stratum& stratum(std::size_t h) const { return strata_.at(h); }
  std::size_t num_strata() const noexcept { return strata_.size(); }
  std::size_t size() const noexcept { return total_units_; }
  std::vector<double> indices() const;

private:
  std::vector<Stratum> strata_;
  std::size_t total_units_ = 0;
};

struct GaussianPopConfig {
  int strata = 50;
  int units_per_stratum = 60;
  double phi = 5.0;
  std::uint64_t seed = 1;
};

//! Constants of the gamma construction. x ~ Gamma(x_shape, x_scale),
//! y | x ~ Gamma with mean mean_intercept + mean_slope * x and variance
//! var_mult * x^var_power.
struct HmtPopConfig {
  int units = 2000;
  int strata = 20;
  std::uint64_t seed = 1;
  double x_shape = 2.0;
  double x_scale = 5.0;
  double mean_intercept = 0.4;
  double mean_slope = 0.25;
  double var_power = 1.5;
  double var_mult = 0.1;
};

//! Mean function of the Gaussian generator: rescaled g(x) = 1 + 2(x - 0.5) on [0, 1].
double gaussian_mean_function(double x) noexcept;

FinitePopulation gaussian_population(const GaussianPopConfig& cfg);
FinitePopulation hmt_population(const HmtPopConfig& cfg);

//! Min-max scaling onto [0, 1]. Throws ConfigError for fewer than two
//! distinct values.
std::vector<double> standardize_index(std::span<const double> values);

//! Cut points of the greedy cumulative-sum partition of `sorted_x` into
//! `groups` contiguous runs of roughly equal total. Returns `groups + 1`
//! boundaries into sorted_x.
std::vector<std::size_t> equal_total_cuts(std::span<const double> sorted_x, int groups);

//! Stratum collapsing index from per-unit indices (their mean).
double stratum_index_from_units(std::span<const double> x_unit) noexcept;

double population_mean(const FinitePopulation& pop);

// CSV: stratum_id,unit_id,y,x_unit,size
void write_population_csv(std::ostream& out, const FinitePopulation& pop,
                          const std::vector<std::string>& comments = {});
FinitePopulation read_population_csv(std::istream& in);

}  // namespace finestrat
