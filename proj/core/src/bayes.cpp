#include "finestrat/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "finestrat/csv.hpp"
#include "finestrat/error.hpp"

namespace finestrat {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

double clamped_variance(double eta) {
  return std::exp(std::clamp(eta, -kLogVarianceClamp, kLogVarianceClamp));
}

void require_pd(int n, double rho) {
  if (!equicorr_is_pd(n, rho)) {
    throw ConfigError("equicorrelation rho = " + std::to_string(rho) + " is not positive definite for n = " +
                      std::to_string(n) + " (need " + std::to_string(equicorr_rho_lower(n)) + " < rho < 1)");
  }
}

double inv_sqrt_mean_factor(int n, double rho) { return 1.0 / std::sqrt(1.0 + (n - 1) * rho); }
double inv_sqrt_orth_factor(double rho) { return 1.0 / std::sqrt(1.0 - rho); }

// Type-7 quantile of an unsorted sample.
double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Eigen::LLT<Eigen::MatrixXd> factor_precision(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  const double jitter = 1e-8 * a.trace() / static_cast<double>(a.rows());
  Eigen::MatrixXd jittered = a;
  jittered.diagonal().array() += jitter;
  llt.compute(jittered);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("beta full-conditional precision is not positive definite (diagonal range [" +
                         std::to_string(a.diagonal().minCoeff()) + ", " +
                         std::to_string(a.diagonal().maxCoeff()) + "], jitter " + std::to_string(jitter) + ")");
  }
  return llt;
}

Eigen::MatrixXd prior_precision(Eigen::Index p, Eigen::Index fixed, double s_fixed, double tau2) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) a(k, k) = k < fixed ? 1.0 / s_fixed : 1.0 / tau2;
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------

bool equicorr_is_pd(int n, double rho) noexcept {
  return n >= 1 && std::isfinite(rho) && 1.0 - rho > 0.0 && 1.0 + (n - 1) * rho > 0.0;
}

double equicorr_rho_lower(int n) noexcept { return n > 1 ? -1.0 / (n - 1) : -1.0; }

Eigen::MatrixXd equicorr_inv_sqrt(int n, double rho) {
  require_pd(n, rho);
  const double c1 = inv_sqrt_mean_factor(n, rho);
  const double c2 = inv_sqrt_orth_factor(rho);
  const Eigen::MatrixXd j_over_n = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  return c1 * j_over_n + c2 * (Eigen::MatrixXd::Identity(n, n) - j_over_n);
}

double equicorr_logdet(int n, double rho) {
  require_pd(n, rho);
  return (n - 1) * std::log(1.0 - rho) + std::log(1.0 + (n - 1) * rho);
}

Eigen::VectorXd decorrelate(const Eigen::VectorXd& y, double m, double rho) {
  const int n = static_cast<int>(y.size());
  require_pd(n, rho);
  const Eigen::VectorXd r = y.array() - m;
  const double mean = r.sum() / n;
  const double c1 = inv_sqrt_mean_factor(n, rho);
  const double c2 = inv_sqrt_orth_factor(rho);
  return (c1 * mean + c2 * (r.array() - mean)).matrix();
}

void Priors::validate() const {
  for (double v : {s_beta, s_gamma, a_beta, b_beta, a_gamma, b_gamma}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("prior hyperparameters must be finite and > 0");
  }
}

void McmcConfig::validate() const {
  if (iterations < 1 || burn_in < 0 || burn_in >= iterations) {
    throw ConfigError("MCMC needs 0 <= burn_in < iterations");
  }
  if (!(step_gamma > 0.0) || !(step_rho > 0.0)) throw ConfigError("MCMC step sizes must be > 0");
  if (!(target_accept > 0.0 && target_accept < 1.0)) throw ConfigError("target acceptance must be in (0, 1)");
}

ModelData ModelData::build(const DrawnSample& s, const NormalizedWeights& w, SplineBasis basis) {
  if (w.per_stratum.size() != s.num_strata()) throw ConfigError("weights do not match the sample");
  ModelData d{std::move(basis), s.indices(), {}, {}, {}};
  d.rows = d.basis.design_matrix(d.x);
  for (std::size_t h = 0; h < s.num_strata(); ++h) {
    const auto& st = s.strata[h];
    if (w.per_stratum[h].size() != st.count()) throw ConfigError("weights do not match the sample");
    d.y.push_back(Eigen::Map<const Eigen::VectorXd>(st.y.data(), static_cast<Eigen::Index>(st.count())));
    d.w.push_back(Eigen::Map<const Eigen::VectorXd>(w.per_stratum[h].data(),
                                                    static_cast<Eigen::Index>(st.count())));
  }
  return d;
}

int ModelData::max_psu() const noexcept {
  Eigen::Index n = 0;
  for (const auto& v : y) n = std::max(n, v.size());
  return static_cast<int>(n);
}

// ---------------------------------------------------------------------------

double log_pseudo_likelihood_single(const ModelData& d, const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& gamma) {
  double sum = 0.0;
  for (std::size_t h = 0; h < d.num_strata(); ++h) {
    if (d.y[h].size() != 1) throw ConfigError("single-PSU likelihood needs exactly one unit per stratum");
    const auto row = d.rows.row(static_cast<Eigen::Index>(h));
    const double m = row.dot(beta);
    const double s2 = clamped_variance(row.dot(gamma));
    const double r = d.y[h](0) - m;
    sum += d.w[h](0) * (-0.5 * (kLog2Pi + std::log(s2)) - r * r / (2.0 * s2));
  }
  return sum;
}

double log_power_likelihood_multi(const ModelData& d, const Eigen::VectorXd& beta,
                                  const Eigen::VectorXd& gamma, double rho) {
  double sum = 0.0;
  for (std::size_t h = 0; h < d.num_strata(); ++h) {
    const int n = static_cast<int>(d.y[h].size());
    const auto row = d.rows.row(static_cast<Eigen::Index>(h));
    const double m = row.dot(beta);
    const double s2 = clamped_variance(row.dot(gamma));
    const Eigen::VectorXd z = decorrelate(d.y[h], m, rho);
    double inner = 0.0;
    for (int j = 0; j < n; ++j) {
      inner += d.w[h](j) * (-0.5 * (kLog2Pi + std::log(s2)) - z(j) * z(j) / (2.0 * s2));
    }
    sum += -0.5 * equicorr_logdet(n, rho) + inner;
  }
  return sum;
}

double log_prior_coefficients(const Eigen::VectorXd& coef, Eigen::Index fixed, double s_fixed, double tau2) {
  const double head = coef.head(fixed).squaredNorm();
  const double tail = coef.tail(coef.size() - fixed).squaredNorm();
  return -0.5 * head / s_fixed - 0.5 * tail / tau2;
}

// ---------------------------------------------------------------------------

double gibbs_tau2(const Eigen::VectorXd& tail_coefs, double a, double b, Rng& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("inverse-gamma parameters must be > 0");
  const double shape = a + 0.5 * static_cast<double>(tail_coefs.size());
  const double rate = b + 0.5 * tail_coefs.squaredNorm();
  return rng.inverse_gamma(shape, rate);
}

Eigen::VectorXd BetaConditional::mean() const { return factor_precision(precision).solve(rhs); }

Eigen::MatrixXd BetaConditional::covariance() const {
  return factor_precision(precision).solve(Eigen::MatrixXd::Identity(precision.rows(), precision.cols()));
}

Eigen::VectorXd BetaConditional::draw(Rng& rng) const {
  const auto llt = factor_precision(precision);
  Eigen::VectorXd z(precision.rows());
  for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.normal();
  // A = L L', so L'^{-1} z has covariance A^{-1}.
  return llt.solve(rhs) + llt.matrixU().solve(z);
}

BetaConditional beta_conditional_single(const ModelData& d, const Eigen::VectorXd& gamma, double tau2_beta,
                                        const Priors& priors) {
  const auto p = d.basis.dimension();
  BetaConditional c{prior_precision(p, d.basis.fixed_dimension(), priors.s_beta, tau2_beta),
                    Eigen::VectorXd::Zero(p)};
  for (std::size_t h = 0; h < d.num_strata(); ++h) {
    if (d.y[h].size() != 1) throw ConfigError("single-PSU update needs exactly one unit per stratum");
    const Eigen::VectorXd b = d.rows.row(static_cast<Eigen::Index>(h)).transpose();
    const double s2 = clamped_variance(b.dot(gamma));
    const double coef_a = d.w[h](0) / s2;
    const double coef_b = d.w[h](0) * d.y[h](0) / s2;
    c.precision.noalias() += coef_a * b * b.transpose();
    c.rhs.noalias() += coef_b * b;
  }
  return c;
}

BetaConditional beta_conditional_multi(const ModelData& d, const Eigen::VectorXd& gamma, double rho,
                                       double tau2_beta, const Priors& priors) {
  const auto p = d.basis.dimension();
  BetaConditional c{prior_precision(p, d.basis.fixed_dimension(), priors.s_beta, tau2_beta),
                    Eigen::VectorXd::Zero(p)};
  for (std::size_t h = 0; h < d.num_strata(); ++h) {
    const int n = static_cast<int>(d.y[h].size());
    const Eigen::VectorXd b = d.rows.row(static_cast<Eigen::Index>(h)).transpose();
    const double s2 = clamped_variance(b.dot(gamma));
    // With M = R^{-1/2} W R^{-1/2}: R^{-1/2} 1 = c1 1, so 1'M1 = c1^2 sum w and
    // 1'M y = c1 sum_j w_j (R^{-1/2} y)_j.
    const double c1 = inv_sqrt_mean_factor(n, rho);
    const Eigen::VectorXd u = decorrelate(d.y[h], 0.0, rho);
    double sum_w = 0.0;
    double sum_wu = 0.0;
    for (int j = 0; j < n; ++j) {
      sum_w += d.w[h](j);
      sum_wu += d.w[h](j) * u(j);
    }
    const double coef_a = c1 * c1 * sum_w / s2;
    const double coef_b = c1 * sum_wu / s2;
    c.precision.noalias() += coef_a * b * b.transpose();
    c.rhs.noalias() += coef_b * b;
  }
  return c;
}

Eigen::VectorXd gibbs_beta_single(const ModelData& d, const Eigen::VectorXd& gamma, double tau2_beta,
                                  const Priors& priors, Rng& rng) {
  return beta_conditional_single(d, gamma, tau2_beta, priors).draw(rng);
}

Eigen::VectorXd gibbs_beta_multi(const ModelData& d, const Eigen::VectorXd& gamma, double rho,
                                 double tau2_beta, const Priors& priors, Rng& rng) {
  return beta_conditional_multi(d, gamma, rho, tau2_beta, priors).draw(rng);
}

bool mh_accept(double log_ratio, Rng& rng) {
  const double u = rng.uniform();
  if (std::isnan(log_ratio)) return false;
  return std::log(u) < log_ratio;
}

namespace {

template <typename LogLik>
std::pair<Eigen::VectorXd, bool> mh_gamma_step(const ModelData& d, const ThetaState& state, const Priors& priors,
                                               double step, Rng& rng, LogLik&& loglik) {
  if (!(step > 0.0)) throw ConfigError("MH step size must be > 0");
  const auto fixed = d.basis.fixed_dimension();
  const auto log_target = [&](const Eigen::VectorXd& g) {
    return loglik(g) + log_prior_coefficients(g, fixed, priors.s_gamma, state.tau2_gamma);
  };
  Eigen::VectorXd proposal(state.gamma.size());
  for (Eigen::Index k = 0; k < proposal.size(); ++k) proposal(k) = state.gamma(k) + step * rng.normal();
  const double log_ratio = log_target(proposal) - log_target(state.gamma);
  if (mh_accept(log_ratio, rng)) return {std::move(proposal), true};
  return {state.gamma, false};
}

}  // namespace

std::pair<Eigen::VectorXd, bool> mh_gamma_single(const ModelData& d, const ThetaState& state,
                                                 const Priors& priors, double step, Rng& rng) {
  return mh_gamma_step(d, state, priors, step, rng, [&](const Eigen::VectorXd& g) {
    return log_pseudo_likelihood_single(d, state.beta, g);
  });
}

std::pair<Eigen::VectorXd, bool> mh_gamma_multi(const ModelData& d, const ThetaState& state,
                                                const Priors& priors, double step, Rng& rng) {
  return mh_gamma_step(d, state, priors, step, rng, [&](const Eigen::VectorXd& g) {
    return log_power_likelihood_multi(d, state.beta, g, state.rho);
  });
}

std::pair<double, bool> mh_rho(const ModelData& d, const ThetaState& state, double step, Rng& rng) {
  if (!(step > 0.0)) throw ConfigError("MH step size must be > 0");
  const double proposal = state.rho + step * rng.normal();
  const int n_max = d.max_psu();
  if (!equicorr_is_pd(n_max, proposal)) {
    rng.uniform();  // keep the stream aligned with the in-range path
    return {state.rho, false};
  }
  const double log_ratio = log_power_likelihood_multi(d, state.beta, state.gamma, proposal) -
                           log_power_likelihood_multi(d, state.beta, state.gamma, state.rho);
  if (mh_accept(log_ratio, rng)) return {proposal, true};
  return {state.rho, false};
}

ThetaState initial_state(const ModelData& d, const Priors& priors) {
  const auto p = d.basis.dimension();
  const auto fixed = d.basis.fixed_dimension();
  Eigen::MatrixXd a = prior_precision(p, fixed, priors.s_beta, 1.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
  for (std::size_t h = 0; h < d.num_strata(); ++h) {
    const Eigen::VectorXd b = d.rows.row(static_cast<Eigen::Index>(h)).transpose();
    double sum_w = 0.0;
    double sum_wy = 0.0;
    for (Eigen::Index j = 0; j < d.y[h].size(); ++j) {
      sum_w += d.w[h](j);
      sum_wy += d.w[h](j) * d.y[h](j);
    }
    a.noalias() += sum_w * b * b.transpose();
    rhs.noalias() += sum_wy * b;
  }
  ThetaState st;
  st.beta = factor_precision(a).solve(rhs);
  double ss = 0.0;
  double total_w = 0.0;
  for (std::size_t h = 0; h < d.num_strata(); ++h) {
    const double m = d.rows.row(static_cast<Eigen::Index>(h)).dot(st.beta);
    for (Eigen::Index j = 0; j < d.y[h].size(); ++j) {
      const double r = d.y[h](j) - m;
      ss += d.w[h](j) * r * r;
      total_w += d.w[h](j);
    }
  }
  st.gamma = Eigen::VectorXd::Zero(p);
  st.gamma(0) = std::clamp(std::log(std::max(ss / total_w, 1e-300)), -kLogVarianceClamp, kLogVarianceClamp);
  st.tau2_beta = 1.0;
  st.tau2_gamma = 1.0;
  st.rho = 0.0;
  return st;
}

namespace {

enum class ChainKind { single, multi };

PosteriorDraws run_chain(const ModelData& d, const Priors& priors, const McmcConfig& cfg, ChainKind kind) {
  priors.validate();
  cfg.validate();
  if (d.num_strata() == 0) throw ConfigError("no strata to model");

  Rng rng(cfg.seed);
  const auto fixed = d.basis.fixed_dimension();
  const auto tail = d.basis.dimension() - fixed;
  const bool sample_rho = kind == ChainKind::multi && d.max_psu() > 1;

  ThetaState state = initial_state(d, priors);
  PosteriorDraws out;
  out.rho_fixed = !sample_rho;
  const auto kept = static_cast<std::size_t>(cfg.iterations - cfg.burn_in);
  out.draws.reserve(kept);
  out.accepted_gamma.reserve(kept);
  out.accepted_rho.reserve(kept);

  double log_step_gamma = std::log(cfg.step_gamma);
  double log_step_rho = std::log(cfg.step_rho);
  std::size_t acc_gamma = 0;
  std::size_t acc_rho = 0;

  for (int t = 0; t < cfg.iterations; ++t) {
    state.tau2_beta = gibbs_tau2(state.beta.tail(tail), priors.a_beta, priors.b_beta, rng);
    state.tau2_gamma = gibbs_tau2(state.gamma.tail(tail), priors.a_gamma, priors.b_gamma, rng);

    state.beta = kind == ChainKind::single
                     ? gibbs_beta_single(d, state.gamma, state.tau2_beta, priors, rng)
                     : gibbs_beta_multi(d, state.gamma, state.rho, state.tau2_beta, priors, rng);

    const double step_gamma = std::exp(log_step_gamma);
    auto [gamma, ok_gamma] = kind == ChainKind::single ? mh_gamma_single(d, state, priors, step_gamma, rng)
                                                       : mh_gamma_multi(d, state, priors, step_gamma, rng);
    state.gamma = std::move(gamma);

    bool ok_rho = false;
    if (sample_rho) {
      auto [rho, accepted] = mh_rho(d, state, std::exp(log_step_rho), rng);
      state.rho = rho;
      ok_rho = accepted;
    }

    const bool adapting = cfg.adapt && t < cfg.burn_in;
    if (adapting) {
      // Robbins-Monro on the log step, frozen once burn-in ends.
      const double gain = 1.0 / std::pow(t + 1.0, 0.6);
      log_step_gamma += gain * ((ok_gamma ? 1.0 : 0.0) - cfg.target_accept);
      if (sample_rho) log_step_rho += gain * ((ok_rho ? 1.0 : 0.0) - cfg.target_accept);
    }

    if (t >= cfg.burn_in) {
      out.draws.push_back(state);
      out.accepted_gamma.push_back(ok_gamma ? 1 : 0);
      out.accepted_rho.push_back(ok_rho ? 1 : 0);
      acc_gamma += ok_gamma ? 1 : 0;
      acc_rho += ok_rho ? 1 : 0;
    }
  }
  out.accept_rate_gamma = static_cast<double>(acc_gamma) / static_cast<double>(kept);
  out.accept_rate_rho = sample_rho ? static_cast<double>(acc_rho) / static_cast<double>(kept) : 0.0;
  out.step_gamma = std::exp(log_step_gamma);
  out.step_rho = std::exp(log_step_rho);
  return out;
}

}  // namespace

PosteriorDraws run_mcmc_single(const ModelData& d, const Priors& priors, const McmcConfig& cfg) {
  if (d.max_psu() != 1) throw ConfigError("single-PSU sampler needs exactly one unit per stratum");
  return run_chain(d, priors, cfg, ChainKind::single);
}

PosteriorDraws run_mcmc_multi(const ModelData& d, const Priors& priors, const McmcConfig& cfg) {
  return run_chain(d, priors, cfg, ChainKind::multi);
}

// ---------------------------------------------------------------------------

namespace {

BayesVariance summarize(std::vector<double> per_draw, std::vector<double> s2_hat, Method method) {
  BayesVariance out;
  double sum = 0.0;
  for (double v : per_draw) sum += v;
  out.estimate.method = method;
  out.estimate.value = sum / static_cast<double>(per_draw.size());
  out.s2_hat = std::move(s2_hat);
  out.lower = quantile(per_draw, 0.025);
  out.upper = quantile(per_draw, 0.975);
  out.estimate.diagnostics["ci_lower"] = out.lower;
  out.estimate.diagnostics["ci_upper"] = out.upper;
  return out;
}

}  // namespace

BayesVariance var_bayes_single(const PosteriorDraws& draws, const SplineBasis& basis, const DrawnSample& s) {
  if (draws.draws.empty()) throw ConfigError("no posterior draws");
  const double n_pop = static_cast<double>(s.population_size);
  const auto h_count = s.num_strata();
  std::vector<double> w2(h_count);
  for (std::size_t h = 0; h < h_count; ++h) {
    if (s.strata[h].count() != 1) throw ConfigError("single-PSU variance needs one unit per stratum");
    const double w = 1.0 / s.strata[h].pi.front();
    w2[h] = w * w;
  }
  const Eigen::MatrixXd rows = basis.design_matrix(s.indices());
  std::vector<double> s2_hat(h_count, 0.0);
  std::vector<double> per_draw;
  per_draw.reserve(draws.draws.size());
  for (const auto& th : draws.draws) {
    const Eigen::VectorXd eta = rows * th.gamma;
    double f = 0.0;
    for (std::size_t h = 0; h < h_count; ++h) {
      const double s2 = clamped_variance(eta(static_cast<Eigen::Index>(h)));
      s2_hat[h] += s2;
      f += w2[h] * s2;
    }
    per_draw.push_back(f / (n_pop * n_pop));
  }
  for (auto& v : s2_hat) v /= static_cast<double>(draws.draws.size());
  return summarize(std::move(per_draw), std::move(s2_hat), Method::bayes);
}

BayesVariance var_bayes_multi(const PosteriorDraws& draws, const SplineBasis& basis, const DrawnSample& s) {
  if (draws.draws.empty()) throw ConfigError("no posterior draws");
  const double n_pop = static_cast<double>(s.population_size);
  const auto h_count = s.num_strata();
  // w' R(rho) w = (1 - rho) sum w^2 + rho (sum w)^2
  std::vector<double> sum_w(h_count, 0.0), sum_w2(h_count, 0.0);
  for (std::size_t h = 0; h < h_count; ++h) {
    for (double pi : s.strata[h].pi) {
      sum_w[h] += 1.0 / pi;
      sum_w2[h] += 1.0 / (pi * pi);
    }
  }
  const Eigen::MatrixXd rows = basis.design_matrix(s.indices());
  std::vector<double> s2r_hat(h_count, 0.0);
  std::vector<double> per_draw;
  per_draw.reserve(draws.draws.size());
  for (const auto& th : draws.draws) {
    const Eigen::VectorXd eta = rows * th.gamma;
    double f = 0.0;
    for (std::size_t h = 0; h < h_count; ++h) {
      const double s2 = clamped_variance(eta(static_cast<Eigen::Index>(h)));
      const double quad = (1.0 - th.rho) * sum_w2[h] + th.rho * sum_w[h] * sum_w[h];
      s2r_hat[h] += s2 * quad;
      f += s2 * quad;
    }
    per_draw.push_back(f / (n_pop * n_pop));
  }
  for (auto& v : s2r_hat) v /= static_cast<double>(draws.draws.size());
  return summarize(std::move(per_draw), std::move(s2r_hat), Method::bayes);
}

BayesVariance estimate_bayes(const DrawnSample& s, const BayesOptions& opt, PosteriorDraws* chain) {
  const auto x = s.indices();
  auto basis = make_basis(x, opt.degree, opt.knots);
  const auto weights = opt.ignore_weights ? NormalizedWeights::ones(s) : normalized_weights(s);
  const auto data = ModelData::build(s, weights, basis);
  const bool multi = data.max_psu() > 1;
  const auto draws = multi ? run_mcmc_multi(data, opt.priors, opt.mcmc) : run_mcmc_single(data, opt.priors, opt.mcmc);
  auto out = multi ? var_bayes_multi(draws, basis, s) : var_bayes_single(draws, basis, s);
  out.estimate.method = opt.ignore_weights ? Method::bayes_ignore_weights : Method::bayes;
  out.estimate.diagnostics["accept_gamma"] = draws.accept_rate_gamma;
  out.estimate.diagnostics["step_gamma"] = draws.step_gamma;
  if (multi) {
    out.estimate.diagnostics["accept_rho"] = draws.accept_rate_rho;
    out.estimate.diagnostics["step_rho"] = draws.step_rho;
    double rho_mean = 0.0;
    for (const auto& th : draws.draws) rho_mean += th.rho;
    out.estimate.diagnostics["rho_mean"] = rho_mean / static_cast<double>(draws.draws.size());
  }
  if (chain) *chain = draws;
  return out;
}

void write_chain_csv(std::ostream& out, const PosteriorDraws& draws, int burn_in) {
  if (draws.draws.empty()) return;
  const auto p = draws.draws.front().beta.size();
  out << "iteration";
  for (Eigen::Index k = 0; k < p; ++k) out << ",beta_" << k;
  for (Eigen::Index k = 0; k < p; ++k) out << ",gamma_" << k;
  out << ",tau2_beta,tau2_gamma,rho,accept_gamma,accept_rho\n";
  for (std::size_t i = 0; i < draws.draws.size(); ++i) {
    const auto& th = draws.draws[i];
    out << (burn_in + static_cast<int>(i) + 1);
    for (Eigen::Index k = 0; k < p; ++k) out << ',' << csv::format_double(th.beta(k));
    for (Eigen::Index k = 0; k < p; ++k) out << ',' << csv::format_double(th.gamma(k));
    out << ',' << csv::format_double(th.tau2_beta) << ',' << csv::format_double(th.tau2_gamma) << ','
        << csv::format_double(th.rho) << ',' << int(draws.accepted_gamma[i]) << ','
        << int(draws.accepted_rho[i]) << '\n';
  }
}

}  // namespace finestrat
