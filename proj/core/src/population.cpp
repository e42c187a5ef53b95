#include "finestrat/population.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "finestrat/csv.hpp"
#include "finestrat/error.hpp"
#include "finestrat/rng.hpp"

namespace finestrat {

double Stratum::total() const noexcept { return std::accumulate(y.begin(), y.end(), 0.0); }

double Stratum::variance() const noexcept {
  const auto n = y.size();
  if (n < 2) return 0.0;
  const double mean = total() / static_cast<double>(n);
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(n - 1);
}

FinitePopulation::FinitePopulation(std::vector<Stratum> strata) : strata_(std::move(strata)) {
  if (strata_.empty()) throw ConfigError("population has no strata");
  for (std::size_t h = 0; h < strata_.size(); ++h) {
    const auto& s = strata_[h];
    if (s.id != static_cast<int>(h) + 1) {
      throw ConfigError("stratum ids must be 1..H in order; found id " + std::to_string(s.id) +
                        " at position " + std::to_string(h + 1));
    }
    if (s.y.empty()) throw ConfigError("stratum " + std::to_string(s.id) + " has no units");
    if (!std::isfinite(s.x)) throw ConfigError("stratum " + std::to_string(s.id) + " has non-finite x");
    for (double v : s.y) {
      if (!std::isfinite(v)) throw ConfigError("stratum " + std::to_string(s.id) + " has non-finite y");
    }
    if (!s.x_unit.empty() && s.x_unit.size() != s.y.size()) {
      throw ConfigError("stratum " + std::to_string(s.id) + ": x_unit length differs from unit count");
    }
    if (s.has_sizes()) {
      if (s.size.size() != s.y.size()) {
        throw ConfigError("stratum " + std::to_string(s.id) + ": size length differs from unit count");
      }
      for (double v : s.size) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw ConfigError("stratum " + std::to_string(s.id) + " has a non-positive size measure");
        }
      }
    }
    total_units_ += s.y.size();
  }
}

std::vector<double> FinitePopulation::indices() const {
  std::vector<double> x;
  x.reserve(strata_.size());
  for (const auto& s : strata_) x.push_back(s.x);
  return x;
}

double gaussian_mean_function(double x) noexcept {
  // g is increasing and linear, so its extremes on [0, 1] sit at the endpoints.
  const auto g = [](double t) { return 1.0 + 2.0 * (t - 0.5); };
  const double g_min = g(0.0);
  const double g_max = g(1.0);
  return 2.0 * (g(x) - g_min) / (g_max - g_min);
}

FinitePopulation gaussian_population(const GaussianPopConfig& cfg) {
  if (cfg.strata < 2) throw ConfigError("gaussian population needs at least 2 strata");
  if (cfg.units_per_stratum < 1) throw ConfigError("units per stratum must be >= 1");
  if (!(cfg.phi >= 0.0) || !std::isfinite(cfg.phi)) throw ConfigError("phi must be finite and >= 0");

  Rng rng(substream_seed(cfg.seed, stream::population));
  std::vector<Stratum> strata;
  strata.reserve(static_cast<std::size_t>(cfg.strata));
  for (int h = 1; h <= cfg.strata; ++h) {
    Stratum s;
    s.id = h;
    s.x = static_cast<double>(h) / cfg.strata;
    const double mean = gaussian_mean_function(s.x);
    s.y.reserve(static_cast<std::size_t>(cfg.units_per_stratum));
    for (int j = 0; j < cfg.units_per_stratum; ++j) s.y.push_back(mean + cfg.phi * rng.normal());
    s.x_unit.assign(s.y.size(), s.x);
    strata.push_back(std::move(s));
  }
  return FinitePopulation(std::move(strata));
}

std::vector<double> standardize_index(std::span<const double> values) {
  if (values.empty()) throw ConfigError("cannot standardize an empty index");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw ConfigError("cannot standardize a constant index (max == min)");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v == *hi ? 1.0 : (v - min) / range);
  return out;
}

std::vector<std::size_t> equal_total_cuts(std::span<const double> sorted_x, int groups) {
  const std::size_t n = sorted_x.size();
  if (groups < 1 || static_cast<std::size_t>(groups) > n) {
    throw ConfigError("cannot cut " + std::to_string(n) + " units into " + std::to_string(groups) +
                      " groups");
  }
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + sorted_x[i];
  const double target = cum[n] / groups;

  std::vector<std::size_t> cuts{0};
  for (int k = 1; k < groups; ++k) {
    const double goal = target * k;
    // Boundary whose cumulative total lands nearest the goal, keeping every
    // group non-empty.
    const std::size_t lo = cuts.back() + 1;
    const std::size_t hi = n - static_cast<std::size_t>(groups - k);
    auto it = std::lower_bound(cum.begin() + static_cast<std::ptrdiff_t>(lo),
                               cum.begin() + static_cast<std::ptrdiff_t>(hi) + 1, goal);
    std::size_t best = static_cast<std::size_t>(it - cum.begin());
    if (best > hi) best = hi;
    if (best > lo && std::abs(cum[best - 1] - goal) <= std::abs(cum[best] - goal)) --best;
    cuts.push_back(best);
  }
  cuts.push_back(n);
  return cuts;
}

double stratum_index_from_units(std::span<const double> x_unit) noexcept {
  if (x_unit.empty()) return 0.0;
  if (std::all_of(x_unit.begin(), x_unit.end(), [&](double v) { return v == x_unit.front(); })) {
    return x_unit.front();
  }
  return std::accumulate(x_unit.begin(), x_unit.end(), 0.0) / static_cast<double>(x_unit.size());
}

FinitePopulation hmt_population(const HmtPopConfig& cfg) {
  if (cfg.strata < 2) throw ConfigError("HMT population needs at least 2 strata");
  if (cfg.units < cfg.strata) throw ConfigError("HMT population needs units >= strata");
  for (double v : {cfg.x_shape, cfg.x_scale, cfg.mean_intercept, cfg.var_mult}) {
    if (!(v > 0.0)) throw ConfigError("HMT gamma parameters must be > 0");
  }
  if (!(cfg.mean_slope >= 0.0) || !(cfg.var_power >= 0.0)) {
    throw ConfigError("HMT mean slope and variance power must be >= 0");
  }

  Rng rng(substream_seed(cfg.seed, stream::population));
  const auto n = static_cast<std::size_t>(cfg.units);
  std::vector<std::pair<double, double>> units(n);
  for (auto& [x, y] : units) {
    x = rng.gamma(cfg.x_shape, cfg.x_scale);
    const double mean = cfg.mean_intercept + cfg.mean_slope * x;
    const double var = cfg.var_mult * std::pow(x, cfg.var_power);
    // Gamma with the given mean and variance: shape = mean^2/var, scale = var/mean.
    y = rng.gamma(mean * mean / var, var / mean);
  }
  std::stable_sort(units.begin(), units.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<double> raw_x(n);
  for (std::size_t i = 0; i < n; ++i) raw_x[i] = units[i].first;
  const auto std_x = standardize_index(raw_x);
  const auto cuts = equal_total_cuts(raw_x, cfg.strata);

  std::vector<Stratum> strata;
  strata.reserve(static_cast<std::size_t>(cfg.strata));
  for (int h = 0; h < cfg.strata; ++h) {
    Stratum s;
    s.id = h + 1;
    for (std::size_t i = cuts[h]; i < cuts[h + 1]; ++i) {
      s.y.push_back(units[i].second);
      s.x_unit.push_back(std_x[i]);
      s.size.push_back(raw_x[i]);
    }
    s.x = stratum_index_from_units(s.x_unit);
    strata.push_back(std::move(s));
  }
  return FinitePopulation(std::move(strata));
}

double population_mean(const FinitePopulation& pop) {
  if (pop.size() == 0) throw ConfigError("population is empty");
  double sum = 0.0;
  for (const auto& s : pop.strata()) sum += s.total();
  return sum / static_cast<double>(pop.size());
}

void write_population_csv(std::ostream& out, const FinitePopulation& pop,
                          const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "stratum_id,unit_id,y,x_unit,size\n";
  for (const auto& s : pop.strata()) {
    for (std::size_t j = 0; j < s.count(); ++j) {
      out << s.id << ',' << (j + 1) << ',' << csv::format_double(s.y[j]) << ','
          << csv::format_double(s.x_unit.empty() ? s.x : s.x_unit[j]) << ',';
      if (s.has_sizes()) out << csv::format_double(s.size[j]);
      out << '\n';
    }
  }
}

FinitePopulation read_population_csv(std::istream& in) {
  const auto table = csv::read(in);
  const auto c_stratum = table.require_column("stratum_id");
  const auto c_unit = table.require_column("unit_id");
  const auto c_y = table.require_column("y");
  const auto c_x = table.require_column("x_unit");
  const auto c_size = table.require_column("size");

  struct Row {
    long long unit;
    double y, x;
    std::optional<double> size;
  };
  std::map<long long, std::vector<Row>> by_stratum;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r];
    const auto line = table.line_numbers[r];
    Row row{csv::parse_int(f[c_unit], line, "unit_id"), csv::parse_double(f[c_y], line, "y"),
            csv::parse_double(f[c_x], line, "x_unit"), std::nullopt};
    if (!f[c_size].empty()) row.size = csv::parse_double(f[c_size], line, "size");
    by_stratum[csv::parse_int(f[c_stratum], line, "stratum_id")].push_back(row);
  }

  std::vector<Stratum> strata;
  long long expected = 1;
  for (auto& [id, rows] : by_stratum) {
    if (id != expected) {
      throw DataError("stratum ids must be consecutive from 1; missing id " + std::to_string(expected));
    }
    ++expected;
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.unit < b.unit; });
    Stratum s;
    s.id = static_cast<int>(id);
    const bool sized = rows.front().size.has_value();
    for (const auto& row : rows) {
      if (row.size.has_value() != sized) {
        throw DataError("stratum " + std::to_string(id) + " mixes rows with and without size");
      }
      s.y.push_back(row.y);
      s.x_unit.push_back(row.x);
      if (sized) s.size.push_back(*row.size);
    }
    s.x = stratum_index_from_units(s.x_unit);
    strata.push_back(std::move(s));
  }
  try {
    return FinitePopulation(std::move(strata));
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
}

}  // namespace finestrat
