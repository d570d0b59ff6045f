#pragma once

// Post-hoc reflection fix. A joint sign flip of (beta_{.k}, alpha_{.k})
// leaves every inner product alpha_j . beta_i unchanged, so chains that
// settled into mirrored modes can be aligned after the fact without
// touching the likelihood.

#include <string>
#include <vector>

#include "ideal/errors.hpp"
#include "ideal/sampler.hpp"

namespace ideal {

// Flips (beta, alpha) signs per chain and dimension so the reference
// legislator's posterior-mean coordinate matches desired_sign.
inline PosteriorDraws orient_draws(const PosteriorDraws& draws,
                                   const std::string& reference,
                                   const std::vector<int>& desired_sign) {
  int ref = -1;
  for (int i = 0; i < draws.n; ++i) {
    if (draws.legislators[static_cast<std::size_t>(i)].id == reference) {
      ref = i;
      break;
    }
  }
  if (ref < 0) throw ValidationError("orient_draws: unknown legislator id: " + reference);
  if (draws.is_anchored(ref)) {
    throw ValidationError("orient_draws: reference legislator is anchored");
  }
  if (static_cast<int>(desired_sign.size()) != draws.d) {
    throw ValidationError("orient_draws: desired_sign needs one entry per dimension");
  }
  for (int s : desired_sign) {
    if (s != 1 && s != -1) {
      throw ValidationError("orient_draws: desired_sign entries must be +1 or -1");
    }
  }

  PosteriorDraws out = draws;
  for (auto& chain : out.chains) {
    for (int k = 0; k < out.d; ++k) {
      const double mean = chain.beta.col(ref * out.d + k).mean();
      if (mean * static_cast<double>(desired_sign[static_cast<std::size_t>(k)]) >= 0.0) {
        continue;
      }
      // The reflection must cover every beta row (anchors included) so that
      // each alpha_j . beta_i is preserved term by term.
      for (int i = 0; i < out.n; ++i) {
        chain.beta.col(i * out.d + k) = -chain.beta.col(i * out.d + k);
      }
      for (int j = 0; j < out.m; ++j) {
        chain.alpha.col(j * out.d + k) = -chain.alpha.col(j * out.d + k);
      }
    }
  }
  return out;
}

}  // namespace ideal
