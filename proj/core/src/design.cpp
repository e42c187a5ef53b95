#include "finestrat/design.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "finestrat/csv.hpp"
#include "finestrat/error.hpp"

namespace finestrat {

std::string_view to_string(DesignKind kind) noexcept {
  switch (kind) {
    case DesignKind::srswor: return "srswor";
    case DesignKind::pps_systematic: return "pps_systematic";
  }
  return "unknown";
}

DesignKind parse_design_kind(std::string_view name) {
  if (name == "srswor") return DesignKind::srswor;
  if (name == "pps_systematic" || name == "systematic" || name == "pps") {
    return DesignKind::pps_systematic;
  }
  throw ConfigError("unknown design '" + std::string(name) + "' (expected srswor or pps_systematic)");
}

int SamplingPlan::n_for(std::size_t h) const {
  if (n_per_stratum.empty()) throw ConfigError("sampling plan has no sample sizes");
  return n_per_stratum.size() == 1 ? n_per_stratum.front() : n_per_stratum.at(h);
}

void SamplingPlan::validate(const FinitePopulation& pop) const {
  if (n_per_stratum.size() != 1 && n_per_stratum.size() != pop.num_strata()) {
    throw ConfigError("sampling plan lists " + std::to_string(n_per_stratum.size()) +
                      " sample sizes for " + std::to_string(pop.num_strata()) + " strata");
  }
  for (std::size_t h = 0; h < pop.num_strata(); ++h) {
    const int n = n_for(h);
    const auto& s = pop.stratum(h);
    if (n < 1 || static_cast<std::size_t>(n) > s.count()) {
      throw ConfigError("stratum " + std::to_string(s.id) + ": sample size " + std::to_string(n) +
                        " outside [1, " + std::to_string(s.count()) + "]");
    }
  }
}

double SampledStratum::ht_total() const noexcept {
  double t = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) t += y[j] / pi[j];
  return t;
}

std::size_t DrawnSample::sample_size() const noexcept {
  std::size_t n = 0;
  for (const auto& s : strata) n += s.count();
  return n;
}

std::size_t DrawnSample::max_stratum_sample() const noexcept {
  std::size_t n = 0;
  for (const auto& s : strata) n = std::max(n, s.count());
  return n;
}

std::vector<double> DrawnSample::indices() const {
  std::vector<double> x;
  x.reserve(strata.size());
  for (const auto& s : strata) x.push_back(s.x);
  return x;
}

double NormalizedWeights::mean() const noexcept {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& w : per_stratum) {
    sum = std::accumulate(w.begin(), w.end(), sum);
    n += w.size();
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

NormalizedWeights NormalizedWeights::ones(const DrawnSample& s) {
  NormalizedWeights w;
  for (const auto& st : s.strata) w.per_stratum.emplace_back(st.count(), 1.0);
  return w;
}

namespace {

SampledStratum start_stratum(const Stratum& s) {
  SampledStratum out;
  out.id = s.id;
  out.x = s.x;
  out.population_size = s.count();
  return out;
}

void check_pps_sizes(const Stratum& s, int n) {
  if (!s.has_sizes()) {
    throw ConfigError("stratum " + std::to_string(s.id) + " has no size measure; pps design needs one");
  }
  const double total = std::accumulate(s.size.begin(), s.size.end(), 0.0);
  for (std::size_t j = 0; j < s.count(); ++j) {
    if (n * s.size[j] / total > 1.0 + 1e-12) {
      throw ConfigError("stratum " + std::to_string(s.id) + ": unit " + std::to_string(j + 1) +
                        " would be a certainty selection (n_h * size / total > 1); reduce n_h");
    }
  }
}

}  // namespace

std::vector<double> inclusion_probabilities(const FinitePopulation& pop, const SamplingPlan& plan,
                                            std::size_t h) {
  const auto& s = pop.stratum(h);
  const int n = plan.n_for(h);
  if (plan.kind == DesignKind::srswor) {
    return std::vector<double>(s.count(), static_cast<double>(n) / static_cast<double>(s.count()));
  }
  check_pps_sizes(s, n);
  const double total = std::accumulate(s.size.begin(), s.size.end(), 0.0);
  std::vector<double> pi(s.count());
  for (std::size_t j = 0; j < s.count(); ++j) pi[j] = std::min(1.0, n * s.size[j] / total);
  return pi;
}

DrawnSample draw_srswor(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng) {
  if (plan.kind != DesignKind::srswor) throw ConfigError("draw_srswor called with a non-srswor plan");
  plan.validate(pop);
  DrawnSample out;
  out.kind = DesignKind::srswor;
  out.population_size = pop.size();
  std::vector<std::size_t> frame;
  for (std::size_t h = 0; h < pop.num_strata(); ++h) {
    const auto& s = pop.stratum(h);
    const auto n = static_cast<std::size_t>(plan.n_for(h));
    frame.resize(s.count());
    std::iota(frame.begin(), frame.end(), std::size_t{0});
    // Partial Fisher-Yates: the first n positions become a uniform n-subset.
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = i + rng.index(frame.size() - i);
      std::swap(frame[i], frame[k]);
    }
    std::sort(frame.begin(), frame.begin() + static_cast<std::ptrdiff_t>(n));
    auto st = start_stratum(s);
    const double pi = static_cast<double>(n) / static_cast<double>(s.count());
    for (std::size_t i = 0; i < n; ++i) {
      st.units.push_back(frame[i]);
      st.y.push_back(s.y[frame[i]]);
      st.pi.push_back(pi);
    }
    out.strata.push_back(std::move(st));
  }
  return out;
}

DrawnSample draw_pps_systematic(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng) {
  if (plan.kind != DesignKind::pps_systematic) {
    throw ConfigError("draw_pps_systematic called with a non-pps plan");
  }
  plan.validate(pop);
  DrawnSample out;
  out.kind = DesignKind::pps_systematic;
  out.population_size = pop.size();
  for (std::size_t h = 0; h < pop.num_strata(); ++h) {
    const auto& s = pop.stratum(h);
    const int n = plan.n_for(h);
    const auto pi = inclusion_probabilities(pop, plan, h);
    const double total = std::accumulate(s.size.begin(), s.size.end(), 0.0);
    const double step = total / n;
    // Selection points start + k*step with start uniform on (0, step].
    const double start = step * (1.0 - rng.uniform());
    auto st = start_stratum(s);
    double cum = 0.0;
    int k = 0;
    for (std::size_t j = 0; j < s.count() && k < n; ++j) {
      const double next = (j + 1 == s.count()) ? total : cum + s.size[j];
      if (start + k * step <= next) {
        st.units.push_back(j);
        st.y.push_back(s.y[j]);
        st.pi.push_back(pi[j]);
        ++k;
      }
      cum = next;
    }
    if (k != n) throw NumericalError("systematic selection in stratum " + std::to_string(s.id) +
                                     " picked " + std::to_string(k) + " of " + std::to_string(n) + " units");
    out.strata.push_back(std::move(st));
  }
  return out;
}

DrawnSample draw_sample(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng) {
  return plan.kind == DesignKind::srswor ? draw_srswor(pop, plan, rng)
                                         : draw_pps_systematic(pop, plan, rng);
}

NormalizedWeights normalized_weights(const DrawnSample& s) {
  NormalizedWeights w;
  double inv_sum = 0.0;
  std::size_t n = 0;
  bool equal = true;
  const double first_pi = s.strata.empty() || s.strata.front().pi.empty() ? 0.0 : s.strata.front().pi.front();
  for (const auto& st : s.strata) {
    for (double pi : st.pi) {
      if (!(pi > 0.0)) throw ConfigError("inclusion probabilities must be > 0");
      inv_sum += 1.0 / pi;
      equal = equal && pi == first_pi;
      ++n;
    }
  }
  const double mean_inv = inv_sum / static_cast<double>(n);
  for (const auto& st : s.strata) {
    std::vector<double> ws;
    ws.reserve(st.count());
    for (double pi : st.pi) ws.push_back(equal ? 1.0 : (1.0 / pi) / mean_inv);
    w.per_stratum.push_back(std::move(ws));
  }
  return w;
}

double true_variance_exact_srswor(const FinitePopulation& pop, const SamplingPlan& plan) {
  if (plan.kind != DesignKind::srswor) throw ConfigError("exact variance oracle requires srswor");
  plan.validate(pop);
  double v = 0.0;
  for (std::size_t h = 0; h < pop.num_strata(); ++h) {
    const auto& s = pop.stratum(h);
    const double nh = plan.n_for(h);
    const double big = static_cast<double>(s.count());
    v += big * big * (1.0 - nh / big) * s.variance() / nh;
  }
  const double n = static_cast<double>(pop.size());
  return v / (n * n);
}

double true_variance_exact_pps_single(const FinitePopulation& pop) {
  const auto plan = SamplingPlan::uniform(DesignKind::pps_systematic, 1);
  double v = 0.0;
  for (std::size_t h = 0; h < pop.num_strata(); ++h) {
    const auto& s = pop.stratum(h);
    const auto pi = inclusion_probabilities(pop, plan, h);
    const double t = s.total();
    for (std::size_t j = 0; j < s.count(); ++j) {
      const double dev = s.y[j] / pi[j] - t;
      v += pi[j] * dev * dev;
    }
  }
  const double n = static_cast<double>(pop.size());
  return v / (n * n);
}

MonteCarloVariance true_variance_mc(const FinitePopulation& pop, const SamplingPlan& plan,
                                    std::size_t draws, std::uint64_t seed) {
  if (draws < 1000) throw ConfigError("Monte Carlo truth needs at least 1000 draws");
  plan.validate(pop);
  Rng rng(substream_seed(seed, stream::truth));
  const double n_pop = static_cast<double>(pop.size());
  std::vector<double> values(draws);
  for (auto& v : values) {
    const auto s = draw_sample(pop, plan, rng);
    double t = 0.0;
    for (const auto& st : s.strata) t += st.ht_total();
    v = t / n_pop;
  }
  const double d = static_cast<double>(draws);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / d;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double c = (v - mean) * (v - mean);
    m2 += c;
    m4 += c * c;
  }
  MonteCarloVariance out;
  out.draws = draws;
  out.mean = mean;
  out.variance = m2 / (d - 1.0);
  const double var_pop = m2 / d;
  const double kurt_term = m4 / d - var_pop * var_pop;
  out.std_error = std::sqrt(std::max(kurt_term, 0.0) / d);
  return out;
}

void write_sample_csv(std::ostream& out, const DrawnSample& s, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# population_size=" << s.population_size << " design=" << to_string(s.kind) << '\n';
  out << "stratum_id,unit_id,y,pi,x_stratum\n";
  for (const auto& st : s.strata) {
    for (std::size_t j = 0; j < st.count(); ++j) {
      out << st.id << ',' << (st.units.empty() ? j + 1 : st.units[j] + 1) << ','
          << csv::format_double(st.y[j]) << ',' << csv::format_double(st.pi[j]) << ','
          << csv::format_double(st.x) << '\n';
    }
  }
}

DrawnSample read_sample_csv(std::istream& in, DesignKind kind) {
  const auto table = csv::read(in);
  const auto c_stratum = table.require_column("stratum_id");
  const auto c_unit = table.require_column("unit_id");
  const auto c_y = table.require_column("y");
  const auto c_pi = table.require_column("pi");
  const auto c_x = table.require_column("x_stratum");

  DrawnSample out;
  out.kind = kind;
  if (auto it = table.meta.find("design"); it != table.meta.end()) out.kind = parse_design_kind(it->second);

  std::map<long long, SampledStratum> by_id;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r];
    const auto line = table.line_numbers[r];
    const auto id = csv::parse_int(f[c_stratum], line, "stratum_id");
    const auto unit = csv::parse_int(f[c_unit], line, "unit_id");
    const double pi = csv::parse_double(f[c_pi], line, "pi");
    const double x = csv::parse_double(f[c_x], line, "x_stratum");
    if (!(pi > 0.0 && pi <= 1.0)) {
      throw DataError("line " + std::to_string(line) + ": pi must lie in (0, 1]");
    }
    if (unit < 1) throw DataError("line " + std::to_string(line) + ": unit_id must be >= 1");
    auto [it, fresh] = by_id.try_emplace(id);
    auto& st = it->second;
    if (fresh) {
      st.id = static_cast<int>(id);
      st.x = x;
    } else if (st.x != x) {
      throw DataError("line " + std::to_string(line) + ": x_stratum differs within stratum " +
                      std::to_string(id));
    }
    st.units.push_back(static_cast<std::size_t>(unit - 1));
    st.y.push_back(csv::parse_double(f[c_y], line, "y"));
    st.pi.push_back(pi);
  }
  if (by_id.empty()) throw DataError("sample file has no rows");

  double inv_sum = 0.0;
  for (auto& [id, st] : by_id) {
    double stratum_inv = 0.0;
    for (double pi : st.pi) stratum_inv += 1.0 / pi;
    st.population_size = static_cast<std::size_t>(std::llround(stratum_inv));
    inv_sum += stratum_inv;
    out.strata.push_back(std::move(st));
  }
  if (auto it = table.meta.find("population_size"); it != table.meta.end()) {
    out.population_size = static_cast<std::size_t>(csv::parse_int(it->second, 0, "population_size"));
  } else {
    out.population_size = static_cast<std::size_t>(std::llround(inv_sum));
  }
  return out;
}

}  // namespace finestrat
