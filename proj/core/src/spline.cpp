#include "finestrat/spline.hpp"

#include <algorithm>
#include <cmath>

#include "finestrat/error.hpp"

namespace finestrat {

SplineBasis::SplineBasis(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 0) throw ConfigError("spline degree must be >= 0");
  for (std::size_t l = 1; l < knots_.size(); ++l) {
    if (!(knots_[l] > knots_[l - 1])) throw ConfigError("spline knots must be strictly increasing");
  }
}

Eigen::VectorXd SplineBasis::eval(double x) const {
  Eigen::VectorXd b(dimension());
  double power = 1.0;
  for (int k = 0; k <= degree_; ++k) {
    b(k) = power;
    power *= x;
  }
  for (std::size_t l = 0; l < knots_.size(); ++l) {
    const double d = x - knots_[l];
    b(degree_ + 1 + static_cast<Eigen::Index>(l)) = d > 0.0 ? std::pow(d, degree_) : 0.0;
  }
  return b;
}

Eigen::MatrixXd SplineBasis::design_matrix(std::span<const double> x) const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(x.size()), dimension());
  for (std::size_t i = 0; i < x.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = eval(x[i]).transpose();
  return m;
}

std::vector<double> place_knots(std::span<const double> x, int num_knots) {
  if (num_knots < 1) throw ConfigError("number of knots must be >= 1");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> uniq = sorted;
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  if (uniq.size() < static_cast<std::size_t>(num_knots) + 2) {
    throw ConfigError("placing " + std::to_string(num_knots) + " knots needs at least " +
                      std::to_string(num_knots + 2) + " distinct x values, got " +
                      std::to_string(uniq.size()));
  }
  const double last = static_cast<double>(sorted.size() - 1);
  std::vector<double> knots;
  for (int l = 1; l <= num_knots; ++l) {
    const double pos = last * l / (num_knots + 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    const double q = sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    if (knots.empty() || q > knots.back()) knots.push_back(q);
  }
  return knots;
}

SplineBasis make_basis(std::span<const double> x, int degree, int num_knots) {
  return SplineBasis(degree, place_knots(x, num_knots));
}

double mean_at(const SplineBasis& basis, const Eigen::VectorXd& beta, double x) {
  if (beta.size() != basis.dimension()) {
    throw ConfigError("mean coefficients have length " + std::to_string(beta.size()) +
                      ", basis dimension is " + std::to_string(basis.dimension()));
  }
  return basis.eval(x).dot(beta);
}

double variance_at(const SplineBasis& basis, const Eigen::VectorXd& gamma, double x) {
  if (gamma.size() != basis.dimension()) {
    throw ConfigError("variance coefficients have length " + std::to_string(gamma.size()) +
                      ", basis dimension is " + std::to_string(basis.dimension()));
  }
  const double eta = std::clamp(basis.eval(x).dot(gamma), -kLogVarianceClamp, kLogVarianceClamp);
  return std::exp(eta);
}

}  // namespace finestrat
