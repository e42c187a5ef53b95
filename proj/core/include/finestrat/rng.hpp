#pragma once

#include <cstdint>
#include <random>

namespace finestrat {

//! SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

//! Counter-derived substream seed. Replication r of a run seeded with
//! `base` always gets the same stream regardless of scheduling order.
constexpr std::uint64_t substream_seed(std::uint64_t base, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(base) ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

// Stream tags used to separate independent uses of one replication seed.
namespace stream {
inline constexpr std::uint64_t population = 1;
inline constexpr std::uint64_t sample = 2;
inline constexpr std::uint64_t mcmc = 3;
inline constexpr std::uint64_t truth = 4;
}  // namespace stream

class Rng {
public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal(); }
  //! Gamma with shape k and scale theta.
  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }
  //! Inverse-gamma IG(a, b) with density proportional to x^{-a-1} exp(-b/x).
  double inverse_gamma(double a, double b) { return b / gamma(a, 1.0); }
  //! Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  engine_type& engine() noexcept { return engine_; }

private:
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace finestrat
