#pragma once

// Seeded random streams and the truncated-normal draw used by the
// data-augmentation step. All variates are derived from a mt19937_64
// stream through inverse-CDF transforms, so a run is reproducible from
// (seed, draw order) alone.

#include <cmath>
#include <cstdint>
#include <random>

#include "ideal/errors.hpp"
#include "ideal/normal.hpp"

namespace ideal {

namespace detail {
// splitmix64 finalizer; decorrelates per-chain seeds derived from one seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Substream for chain (or replicate) `index`, decorrelated from the others.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(detail::mix64(seed ^ detail::mix64(index + 1)));
  }

  // Uniform on the open interval (0,1): midpoints of a 2^53 grid, never 0 or 1.
  double uniform_open() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform_open(); }

  double normal() { return inverse_norm_cdf(uniform_open()); }

  double exponential() { return -std::log(uniform_open()); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

enum class TruncationSide { positive, nonpositive };

namespace detail {

// Draw X ~ N(0,1) conditional on X > a.
inline double std_lower_truncated_normal(double a, Rng& rng) {
  if (a < -8.0) {
    // Truncation removes < 1e-15 of the mass; plain rejection.
    for (;;) {
      const double x = rng.normal();
      if (x > a) return x;
    }
  }
  if (a <= 5.0) {
    // Inverse CDF on the upper-tail parameterization, stable for a up to ~5.
    const double q = norm_sf(a);
    const double x = -inverse_norm_cdf(rng.uniform_open() * q);
    return (x > a) ? x : std::nextafter(a, std::numeric_limits<double>::max());
  }
  // Deep tail: Robert's translated-exponential rejection.
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a + rng.exponential() / lambda;
    const double t = x - lambda;
    if (std::log(rng.uniform_open()) <= -0.5 * t * t) return x;
  }
}

}  // namespace detail

// Draw from N(mean, 1) restricted to (0, +inf) or (-inf, 0]. The returned
// value respects the truncation region strictly.
inline double sample_truncated_normal(double mean, TruncationSide side,
                                      Rng& rng) {
  if (!std::isfinite(mean)) {
    throw DomainError("sample_truncated_normal: mean must be finite");
  }
  if (side == TruncationSide::positive) {
    double z = mean + detail::std_lower_truncated_normal(-mean, rng);
    if (z <= 0.0) z = std::numeric_limits<double>::denorm_min();
    return z;
  }
  double z = -(-mean + detail::std_lower_truncated_normal(mean, rng));
  if (z > 0.0) z = 0.0;
  return z;
}

}  // namespace ideal
