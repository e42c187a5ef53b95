#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace finestrat {

//! Truncated power basis of degree q with knots k_1 < ... < k_L:
//! (1, x, ..., x^q, (x - k_1)_+^q, ..., (x - k_L)_+^q).
class SplineBasis {
public:
  SplineBasis(int degree, std::vector<double> knots);

  int degree() const noexcept { return degree_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  std::size_t num_knots() const noexcept { return knots_.size(); }
  //! Basis dimension p = q + 1 + L.
  Eigen::Index dimension() const noexcept { return degree_ + 1 + static_cast<Eigen::Index>(knots_.size()); }
  //! Number of unpenalised polynomial coefficients, q + 1.
  Eigen::Index fixed_dimension() const noexcept { return degree_ + 1; }

  Eigen::VectorXd eval(double x) const;
  //! One basis row per entry of x.
  Eigen::MatrixXd design_matrix(std::span<const double> x) const;

private:
  int degree_;
  std::vector<double> knots_;
};

//! Knots at the l/(L+1) empirical quantiles (linear interpolation between
//! order statistics), deduplicated. Needs at least L + 2 distinct values.
std::vector<double> place_knots(std::span<const double> x, int num_knots);

//! Basis with knots placed on x.
SplineBasis make_basis(std::span<const double> x, int degree, int num_knots);

double mean_at(const SplineBasis& basis, const Eigen::VectorXd& beta, double x);

//! exp of the log-variance spline, clamped to exp([-50, 50]).
double variance_at(const SplineBasis& basis, const Eigen::VectorXd& gamma, double x);

inline constexpr double kLogVarianceClamp = 50.0;

}  // namespace finestrat
