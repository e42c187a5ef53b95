#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "finestrat/design.hpp"
#include "finestrat/estimators.hpp"
#include "finestrat/rng.hpp"
#include "finestrat/spline.hpp"

namespace finestrat {

// ---------------------------------------------------------------------------
// Equicorrelation algebra
//
// R(rho) = (1 - rho) I + rho J has eigenvalue 1 + (n-1) rho on span{1} and
// 1 - rho on its orthogonal complement, so every matrix function of R acts
// as a scalar on each of the two eigenspaces.

//! True when R(rho) of dimension n is positive definite.
bool equicorr_is_pd(int n, double rho) noexcept;

//! Open lower end of the PD range of rho for dimension n (-1/(n-1)).
double equicorr_rho_lower(int n) noexcept;

//! R(rho)^{-1/2} = c1 J/n + c2 (I - J/n), c1 = (1+(n-1)rho)^{-1/2}, c2 = (1-rho)^{-1/2}.
Eigen::MatrixXd equicorr_inv_sqrt(int n, double rho);

//! log|R(rho)| = (n-1) log(1-rho) + log(1+(n-1)rho).
double equicorr_logdet(int n, double rho);

//! R(rho)^{-1/2} (y - m 1) without forming the matrix.
Eigen::VectorXd decorrelate(const Eigen::VectorXd& y, double m, double rho);

// ---------------------------------------------------------------------------
// Model inputs and state

struct Priors {
  double s_beta = 100.0;
  double s_gamma = 100.0;
  double a_beta = 1.0;
  double b_beta = 1.0;
  double a_gamma = 1.0;
  double b_gamma = 1.0;

  void validate() const;
};

//! Observations arranged for the sampler: one entry per stratum with its
//! basis row, sampled values and normalized likelihood weights.
struct ModelData {
  SplineBasis basis;
  std::vector<double> x;
  Eigen::MatrixXd rows;  // H x p basis rows b(x_h)
  std::vector<Eigen::VectorXd> y;
  std::vector<Eigen::VectorXd> w;

  static ModelData build(const DrawnSample& s, const NormalizedWeights& w, SplineBasis basis);

  std::size_t num_strata() const noexcept { return y.size(); }
  int max_psu() const noexcept;
};

struct ThetaState {
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  double tau2_beta = 1.0;
  double tau2_gamma = 1.0;
  double rho = 0.0;
};

struct McmcConfig {
  int iterations = 4000;
  int burn_in = 1000;
  double step_gamma = 0.05;
  double step_rho = 0.1;
  bool adapt = true;
  double target_accept = 0.3;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PosteriorDraws {
  std::vector<ThetaState> draws;  // retained, post burn-in
  std::vector<std::uint8_t> accepted_gamma;
  std::vector<std::uint8_t> accepted_rho;
  double accept_rate_gamma = 0.0;
  double accept_rate_rho = 0.0;
  double step_gamma = 0.0;  // frozen step after adaptation
  double step_rho = 0.0;
  bool rho_fixed = false;
};

// ---------------------------------------------------------------------------
// Likelihoods (additive constants retained)

//! sum_h w_h log phi(y_h; m(x_h; beta), s^2(x_h; gamma)); one PSU per stratum.
double log_pseudo_likelihood_single(const ModelData& d, const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& gamma);

//! sum_h [ -1/2 log|R_h(rho)| + sum_j w_hj log phi(z_hj; 0, s^2(x_h; gamma)) ] with
//! z_h the decorrelated residuals.
double log_power_likelihood_multi(const ModelData& d, const Eigen::VectorXd& beta,
                                  const Eigen::VectorXd& gamma, double rho);

//! log prior of gamma up to a constant: N(0, S_gamma) on fixed terms, N(0, tau2) on knot terms.
double log_prior_coefficients(const Eigen::VectorXd& coef, Eigen::Index fixed, double s_fixed,
                              double tau2);

// ---------------------------------------------------------------------------
// Full conditionals

//! One draw from IG(a + L/2, b + sum c^2 / 2).
double gibbs_tau2(const Eigen::VectorXd& tail_coefs, double a, double b, Rng& rng);

//! Gaussian full conditional of beta in precision form: N(A^{-1} B, A^{-1}).
struct BetaConditional {
  Eigen::MatrixXd precision;  // A
  Eigen::VectorXd rhs;        // B

  Eigen::VectorXd mean() const;
  Eigen::MatrixXd covariance() const;
  //! Exact draw via Cholesky of A; jitters once on failure.
  Eigen::VectorXd draw(Rng& rng) const;
};

BetaConditional beta_conditional_single(const ModelData& d, const Eigen::VectorXd& gamma,
                                        double tau2_beta, const Priors& priors);
BetaConditional beta_conditional_multi(const ModelData& d, const Eigen::VectorXd& gamma, double rho,
                                       double tau2_beta, const Priors& priors);

Eigen::VectorXd gibbs_beta_single(const ModelData& d, const Eigen::VectorXd& gamma, double tau2_beta,
                                  const Priors& priors, Rng& rng);
Eigen::VectorXd gibbs_beta_multi(const ModelData& d, const Eigen::VectorXd& gamma, double rho,
                                 double tau2_beta, const Priors& priors, Rng& rng);

//! Metropolis accept step: true with probability min(1, exp(log_ratio)).
bool mh_accept(double log_ratio, Rng& rng);

//! Random-walk MH update of the whole gamma vector.
std::pair<Eigen::VectorXd, bool> mh_gamma_single(const ModelData& d, const ThetaState& state,
                                                 const Priors& priors, double step, Rng& rng);
std::pair<Eigen::VectorXd, bool> mh_gamma_multi(const ModelData& d, const ThetaState& state,
                                                const Priors& priors, double step, Rng& rng);

//! Random-walk MH update of rho under a uniform prior truncated to the PD range.
std::pair<double, bool> mh_rho(const ModelData& d, const ThetaState& state, double step, Rng& rng);

//! Starting point: ridge-stabilised WLS for beta, log weighted residual
//! variance for the gamma intercept, tau2 = 1, rho = 0.
ThetaState initial_state(const ModelData& d, const Priors& priors);

PosteriorDraws run_mcmc_single(const ModelData& d, const Priors& priors, const McmcConfig& cfg);

//! Multi-PSU sampler. With one PSU in every stratum rho is held at 0 and the
//! chain matches run_mcmc_single draw for draw.
PosteriorDraws run_mcmc_multi(const ModelData& d, const Priors& priors, const McmcConfig& cfg);

// ---------------------------------------------------------------------------
// Variance of the HT mean

struct BayesVariance {
  VarianceEstimate estimate;
  std::vector<double> s2_hat;  // posterior mean of s^2(x_h) (times R_h for multi)
  double lower = 0.0;          // equal-tailed 95% posterior interval of the functional
  double upper = 0.0;
};

//! N^-2 sum_h (1/pi_h)^2 E[s^2(x_h; gamma) | data].
BayesVariance var_bayes_single(const PosteriorDraws& draws, const SplineBasis& basis,
                               const DrawnSample& s);

//! N^-2 sum_h w_h' E[s^2(x_h; gamma) R_h(rho) | data] w_h with w_h = (1/pi_hj)_j.
BayesVariance var_bayes_multi(const PosteriorDraws& draws, const SplineBasis& basis,
                              const DrawnSample& s);

struct BayesOptions {
  int degree = 2;
  int knots = 7;
  Priors priors;
  McmcConfig mcmc;
  bool ignore_weights = false;
};

//! Builds the basis on the sampled strata's indices, runs the matching
//! sampler and returns the variance estimate with sampler diagnostics.
BayesVariance estimate_bayes(const DrawnSample& s, const BayesOptions& opt, PosteriorDraws* chain = nullptr);

//! iteration, beta_*, gamma_*, tau2_beta, tau2_gamma, rho, accept_gamma, accept_rho
void write_chain_csv(std::ostream& out, const PosteriorDraws& draws, int burn_in);

}  // namespace finestrat
