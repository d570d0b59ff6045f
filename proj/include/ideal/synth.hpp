#pragma once

// Ground-truth simulator: draws model parameters from their priors and a
// vote matrix from the probit model, returning both so recovery tests can
// compare against the truth.

#include <Eigen/Core>
#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "ideal/data.hpp"
#include "ideal/errors.hpp"
#include "ideal/model.hpp"
#include "ideal/rng.hpp"

namespace ideal {

struct SynthSpec {
  int n = 50;
  int m = 100;
  int d = 1;
  double alpha_scale = 1.0;
  double mu_scale = 1.0;
  double missing_rate = 0.0;
  double zero_alpha_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 2) throw ValidationError("synth: n must be >= 2");
    if (m < 1) throw ValidationError("synth: m must be >= 1");
    if (d < 1) throw ValidationError("synth: d must be >= 1");
    if (!(alpha_scale > 0.0)) throw ValidationError("synth: alpha_scale must be positive");
    if (!(mu_scale > 0.0)) throw ValidationError("synth: mu_scale must be positive");
    if (missing_rate < 0.0 || missing_rate >= 1.0) {
      throw ValidationError("synth: missing_rate must lie in [0,1)");
    }
    if (zero_alpha_fraction < 0.0 || zero_alpha_fraction > 1.0) {
      throw ValidationError("synth: zero_alpha_fraction must lie in [0,1]");
    }
  }
};

struct SynthResult {
  RollCallMatrix matrix;
  ModelParameters truth;
  std::vector<int> regenerated_columns;  // columns redrawn to break unanimity
};

namespace detail {

inline std::string padded_id(const char* prefix, int k) {
  std::string num = std::to_string(k);
  while (num.size() < 4) num.insert(num.begin(), '0');
  return std::string(prefix) + num;
}

}  // namespace detail

// Draw order (fixed, part of the reproducibility contract): beta row-major,
// zero-alpha motion selection, alpha row-major, mu, then votes column by
// column (missingness uniform, then the Bernoulli draw).
inline SynthResult simulate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  SynthResult out;
  ModelParameters& truth = out.truth;
  truth.d = spec.d;
  truth.beta.resize(spec.n, spec.d);
  for (int i = 0; i < spec.n; ++i) {
    for (int k = 0; k < spec.d; ++k) truth.beta(i, k) = rng.normal();
  }

  std::vector<int> motion_order(static_cast<std::size_t>(spec.m));
  std::iota(motion_order.begin(), motion_order.end(), 0);
  const int zero_count =
      static_cast<int>(std::llround(spec.zero_alpha_fraction * spec.m));
  for (int j = spec.m - 1; j > 0; --j) {
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(j + 1)));
    std::swap(motion_order[static_cast<std::size_t>(j)],
              motion_order[static_cast<std::size_t>(k)]);
  }
  std::vector<bool> zero_alpha(static_cast<std::size_t>(spec.m), false);
  for (int k = 0; k < zero_count; ++k) {
    zero_alpha[static_cast<std::size_t>(motion_order[static_cast<std::size_t>(k)])] = true;
  }

  truth.alpha.resize(spec.m, spec.d);
  for (int j = 0; j < spec.m; ++j) {
    for (int k = 0; k < spec.d; ++k) {
      const double raw = spec.alpha_scale * rng.normal();
      truth.alpha(j, k) = zero_alpha[static_cast<std::size_t>(j)] ? 0.0 : raw;
    }
  }
  truth.mu.resize(spec.m);
  for (int j = 0; j < spec.m; ++j) truth.mu(j) = spec.mu_scale * rng.normal();

  RollCallMatrix& matrix = out.matrix;
  matrix.n = spec.n;
  matrix.m = spec.m;
  matrix.votes.resize(spec.n, spec.m);
  for (int i = 0; i < spec.n; ++i) {
    LegislatorMeta leg;
    leg.id = detail::padded_id("L", i);
    leg.name = leg.id;
    leg.party = truth.beta(i, 0) < 0.0 ? "left" : "right";
    matrix.legislators.push_back(std::move(leg));
  }
  for (int j = 0; j < spec.m; ++j) {
    MotionMeta mo;
    mo.id = detail::padded_id("M", j);
    matrix.motions.push_back(std::move(mo));
  }

  auto draw_column = [&](int j) {
    for (int i = 0; i < spec.n; ++i) {
      if (spec.missing_rate > 0.0 && rng.uniform_open() < spec.missing_rate) {
        matrix.votes(i, j) = -1;
        continue;
      }
      const double theta = truth.mu(j) + truth.alpha.row(j).dot(truth.beta.row(i));
      matrix.votes(i, j) = (rng.uniform_open() < norm_cdf(theta)) ? 1 : 0;
    }
  };
  auto column_degenerate = [&](int j) {
    int yea = 0, nay = 0;
    for (int i = 0; i < spec.n; ++i) {
      if (matrix.votes(i, j) == 1) ++yea;
      else if (matrix.votes(i, j) == 0) ++nay;
    }
    return yea == 0 || nay == 0;
  };

  constexpr int kMaxRetries = 64;
  for (int j = 0; j < spec.m; ++j) {
    draw_column(j);
    int tries = 0;
    while (column_degenerate(j) && tries < kMaxRetries) {
      draw_column(j);
      ++tries;
    }
    if (tries > 0) out.regenerated_columns.push_back(j);
    if (column_degenerate(j)) {
      throw ValidationError(
          "synth: motion " + matrix.motions[static_cast<std::size_t>(j)].id +
          " stayed unanimous after " + std::to_string(kMaxRetries) +
          " redraws; reduce mu_scale or missing_rate");
    }
  }

  matrix.validate();
  return out;
}

}  // namespace ideal
