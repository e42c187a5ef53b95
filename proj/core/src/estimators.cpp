#include "finestrat/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "finestrat/error.hpp"

namespace finestrat {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::unbiased: return "unbiased";
    case Method::collapsed: return "collapsed";
    case Method::kernel: return "kernel";
    case Method::bayes: return "bayes";
    case Method::bayes_ignore_weights: return "bayes_ignore_weights";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::unbiased, Method::collapsed, Method::kernel, Method::bayes,
                 Method::bayes_ignore_weights}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected unbiased, collapsed, kernel, bayes or bayes_ignore_weights)");
}

double ht_mean(const DrawnSample& s) {
  if (s.population_size == 0) throw ConfigError("sample carries no population size");
  double total = 0.0;
  for (const auto& st : s.strata) {
    for (double pi : st.pi) {
      if (!(pi > 0.0)) throw ConfigError("inclusion probabilities must be > 0");
    }
    total += st.ht_total();
  }
  return total / static_cast<double>(s.population_size);
}

std::vector<double> stratum_ht_totals(const DrawnSample& s) {
  std::vector<double> t;
  t.reserve(s.num_strata());
  for (const auto& st : s.strata) t.push_back(st.ht_total());
  return t;
}

VarianceEstimate unbiased_variance(const DrawnSample& s) {
  if (s.kind != DesignKind::srswor) {
    throw ConfigError("the unbiased variance estimator is implemented for srswor only");
  }
  double v = 0.0;
  for (const auto& st : s.strata) {
    const auto n = st.count();
    if (n < 2) {
      throw ConfigError("stratum " + std::to_string(st.id) +
                        " has one sampled unit: variance not estimable under fine stratification");
    }
    const double nh = static_cast<double>(n);
    const double big = nh / st.pi.front();
    const double mean = std::accumulate(st.y.begin(), st.y.end(), 0.0) / nh;
    double ss = 0.0;
    for (double y : st.y) ss += (y - mean) * (y - mean);
    v += big * big * (1.0 - nh / big) * (ss / (nh - 1.0)) / nh;
  }
  const double n_pop = static_cast<double>(s.population_size);
  return {Method::unbiased, v / (n_pop * n_pop), {}};
}

PseudoStrataMap::PseudoStrataMap(std::vector<std::vector<std::size_t>> groups)
    : groups_(std::move(groups)) {
  std::size_t total = 0;
  for (const auto& g : groups_) total += g.size();
  group_of_.assign(total, total);
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    if (groups_[k].size() < 2 || groups_[k].size() > 3) {
      throw ConfigError("pseudo-strata must have 2 or 3 members");
    }
    for (auto h : groups_[k]) {
      if (h >= total || group_of_[h] != total) {
        throw ConfigError("pseudo-strata must partition the strata exactly once");
      }
      group_of_[h] = k;
    }
  }
  const auto triples = std::count_if(groups_.begin(), groups_.end(),
                                     [](const auto& g) { return g.size() == 3; });
  if (triples > 1) throw ConfigError("at most one pseudo-stratum may have three members");
}

int PseudoStrataMap::indicator(std::size_t l, std::size_t h) const {
  return (l != h && group_of(l) == group_of(h)) ? 1 : 0;
}

PseudoStrataMap make_pseudo_strata(std::span<const double> x) {
  const std::size_t h_count = x.size();
  if (h_count < 2) throw ConfigError("collapsing needs at least two strata");
  std::vector<std::size_t> order(h_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });

  std::vector<std::vector<std::size_t>> groups;
  const std::size_t pairs_end = (h_count % 2 == 0) ? h_count : h_count - 3;
  for (std::size_t i = 0; i < pairs_end; i += 2) groups.push_back({order[i], order[i + 1]});
  if (h_count % 2 == 1) groups.push_back({order[h_count - 3], order[h_count - 2], order[h_count - 1]});
  return PseudoStrataMap(std::move(groups));
}

double collapsed_deviation_sum(std::span<const double> totals, const PseudoStrataMap& map) {
  if (totals.size() != map.num_strata()) {
    throw ConfigError("pseudo-strata map covers " + std::to_string(map.num_strata()) +
                      " strata but " + std::to_string(totals.size()) + " totals were given");
  }
  double sum = 0.0;
  for (const auto& g : map.groups()) {
    const double size = static_cast<double>(g.size());
    double group_total = 0.0;
    for (auto h : g) group_total += totals[h];
    for (auto h : g) {
      const double partner = (group_total - totals[h]) / (size - 1.0);
      const double dev = totals[h] - partner;
      sum += (size - 1.0) / size * dev * dev;
    }
  }
  return sum;
}

VarianceEstimate collapsed_variance(const DrawnSample& s, const PseudoStrataMap& map) {
  const auto totals = stratum_ht_totals(s);
  const double n = static_cast<double>(s.population_size);
  return {Method::collapsed, collapsed_deviation_sum(totals, map) / (n * n), {}};
}

double collapsed_bias_exact(const FinitePopulation& pop, const PseudoStrataMap& map) {
  std::vector<double> totals;
  totals.reserve(pop.num_strata());
  for (const auto& st : pop.strata()) totals.push_back(st.total());
  const double n = static_cast<double>(pop.size());
  return collapsed_deviation_sum(totals, map) / (n * n);
}

double epanechnikov(double u) noexcept {
  return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

KernelWeights kernel_weights(std::span<const double> x, double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ConfigError("bandwidth must be > 0");
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 2) throw ConfigError("kernel weights need at least two strata");
  KernelWeights kw;
  kw.bandwidth = bandwidth;
  kw.d.resize(n, n);
  for (Eigen::Index h = 0; h < n; ++h) {
    for (Eigen::Index l = 0; l < n; ++l) {
      kw.d(h, l) = epanechnikov((x[static_cast<std::size_t>(h)] - x[static_cast<std::size_t>(l)]) / bandwidth);
    }
    kw.d.row(h) /= kw.d.row(h).sum();
  }
  double c = 0.0;
  for (Eigen::Index h = 0; h < n; ++h) c += 1.0 - 2.0 * kw.d(h, h) + kw.d.row(h).squaredNorm();
  kw.c_d = c / static_cast<double>(n);
  if (kw.c_d <= 1e-12) {
    throw NumericalError("kernel normalizing constant C_d is zero: bandwidth " + std::to_string(bandwidth) +
                         " leaves every stratum with only its own weight");
  }
  return kw;
}

double default_bandwidth(std::size_t strata) {
  if (strata < 2) throw ConfigError("default bandwidth needs at least two strata");
  const double h = static_cast<double>(strata);
  return (1.0 / h + 2.0 / h) / 2.0;
}

VarianceEstimate kernel_variance(const DrawnSample& s, const KernelWeights& kw) {
  if (!(kw.c_d > 1e-12)) throw NumericalError("kernel normalizing constant C_d is zero");
  const auto totals = stratum_ht_totals(s);
  if (static_cast<Eigen::Index>(totals.size()) != kw.d.rows()) {
    throw ConfigError("kernel weights do not match the number of sampled strata");
  }
  const Eigen::Map<const Eigen::VectorXd> t(totals.data(), static_cast<Eigen::Index>(totals.size()));
  const Eigen::VectorXd smoothed = kw.d * t;
  const double ss = (t - smoothed).squaredNorm();
  const double n = static_cast<double>(s.population_size);
  return {Method::kernel, ss / kw.c_d / (n * n), {{"c_d", kw.c_d}, {"bandwidth", kw.bandwidth}}};
}

}  // namespace finestrat
