#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "finestrat/design.hpp"
#include "finestrat/population.hpp"

namespace finestrat {

enum class Method { unbiased, collapsed, kernel, bayes, bayes_ignore_weights };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct VarianceEstimate {
  Method method = Method::collapsed;
  double value = 0.0;
  std::map<std::string, double> diagnostics;
};

//! Horvitz-Thompson estimator of the population mean.
double ht_mean(const DrawnSample& s);

//! HT stratum totals, one per sampled stratum.
std::vector<double> stratum_ht_totals(const DrawnSample& s);

//! Design-unbiased variance of ybar_HT under srswor; needs n_h >= 2 everywhere.
VarianceEstimate unbiased_variance(const DrawnSample& s);

// ---------------------------------------------------------------------------
// Collapsed strata

//! Partition of stratum positions (0-based) into pseudo-strata. Strata are
//! sorted by index (ties by position) and paired consecutively; with an odd
//! count the three largest-index strata form one group.
class PseudoStrataMap {
public:
  explicit PseudoStrataMap(std::vector<std::vector<std::size_t>> groups);

  const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }
  std::size_t num_strata() const noexcept { return group_of_.size(); }
  std::size_t group_of(std::size_t h) const { return group_of_.at(h); }
  //! Collapsing indicator c_{l(h)}: 1 if l != h share a pseudo-stratum.
  int indicator(std::size_t l, std::size_t h) const;

private:
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> group_of_;
};

PseudoStrataMap make_pseudo_strata(std::span<const double> x);

//! Squared-deviation sum over pseudo-strata applied to per-stratum totals:
//! sum_h (g-1)/g * (t_h - mean of the other members' t)^2, where g is the
//! group size (1/2 for pairs).
double collapsed_deviation_sum(std::span<const double> totals, const PseudoStrataMap& map);

VarianceEstimate collapsed_variance(const DrawnSample& s, const PseudoStrataMap& map);

//! Design bias of collapsed_variance; needs the full population.
double collapsed_bias_exact(const FinitePopulation& pop, const PseudoStrataMap& map);

// ---------------------------------------------------------------------------
// Kernel-weighted neighbourhood

double epanechnikov(double u) noexcept;

struct KernelWeights {
  Eigen::MatrixXd d;  // row h holds d_{l(h)} over l
  double bandwidth = 0.0;
  double c_d = 0.0;
};

//! Row-normalised Epanechnikov weights and the constant
//! C_d = H^-1 sum_h (1 - 2 d_hh + sum_l d_lh^2). Throws NumericalError when
//! C_d <= 1e-12 (bandwidth too small for the index spacing).
KernelWeights kernel_weights(std::span<const double> x, double bandwidth);

//! Midpoint of the recommended bandwidth range (1/H, 2/H).
double default_bandwidth(std::size_t strata);

VarianceEstimate kernel_variance(const DrawnSample& s, const KernelWeights& kw);

}  // namespace finestrat
