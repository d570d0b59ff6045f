#pragma once

// Group-incentive extension (d = 1): the latent regression gains a
// motion-specific term delta_j * D_i for a binary group indicator, so
// step (b) draws (mu_j, alpha_j, delta_j) jointly.
//
// Identification caveat: shifting every group-member ideal point by a
// constant c while replacing delta_j with delta_j - alpha_j c leaves all
// linear predictors unchanged. Anchors pin the shift only if at least one
// anchor belongs to each group; otherwise the vague priors carry the
// identification, and delta posteriors widen when the groups are nearly
// separated in the ideal-point dimension.

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ideal/analytics.hpp"
#include "ideal/errors.hpp"
#include "ideal/sampler.hpp"

namespace ideal {

struct DeltaPrior {
  double mean = 0.0;
  double variance = 25.0;
};

inline PosteriorDraws run_gibbs_party(const RollCallMatrix& matrix,
                                      const Hyperparameters& hyper,
                                      const AnchorSpec& anchors,
                                      const Eigen::VectorXd& group_indicator,
                                      const SamplerConfig& config,
                                      const DeltaPrior& delta_prior = {}) {
  if (config.d != 1) {
    throw UnsupportedError("the group-incentive extension supports d = 1 only");
  }
  detail::GroupExtension ext;
  ext.active = true;
  ext.D = group_indicator;
  ext.prior_mean = delta_prior.mean;
  ext.prior_variance = delta_prior.variance;
  PosteriorDraws draws = detail::run_gibbs_core(matrix, hyper, anchors, config, ext);

  bool anchor_in_group = false, anchor_out_group = false;
  for (int i = 0; i < matrix.n; ++i) {
    if (anchors.find(matrix.legislators[static_cast<std::size_t>(i)].id) == nullptr) continue;
    (group_indicator(i) == 1.0 ? anchor_in_group : anchor_out_group) = true;
  }
  if (!anchor_in_group || !anchor_out_group) {
    draws.warnings.push_back(
        "no anchor inside both groups: a common shift of group ideal points "
        "can trade off against delta; identification rests on the priors");
  }
  return draws;
}

enum class IncentiveDirection { favor_group, against_group, none };

inline std::string to_string(IncentiveDirection d) {
  switch (d) {
    case IncentiveDirection::favor_group: return "favor-group";
    case IncentiveDirection::against_group: return "against-group";
    default: return "none";
  }
}

struct PartyEffect {
  int index = 0;
  std::string motion_id;
  double mean = 0.0;
  double sd = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  bool significant = false;
  IncentiveDirection direction = IncentiveDirection::none;
  bool closed_vote = false;  // observed yea share in [0.35, 0.65]
};

struct PartyEffectReport {
  std::vector<PartyEffect> effects;
  int significant_count = 0;
  int closed_count = 0;
  int significant_closed_count = 0;
};

// Per-motion delta summaries with direction labels; a positive interval
// means the net incentive favors group members voting yea on that motion.
inline PartyEffectReport party_effect_report(const PosteriorDraws& draws,
                                             double level = 0.95) {
  if (!draws.has_delta) {
    throw ValidationError("party_effect_report: draws carry no delta block");
  }
  PartyEffectReport report;
  report.effects.reserve(static_cast<std::size_t>(draws.m));
  for (int j = 0; j < draws.m; ++j) {
    const ParameterSummary s =
        detail::summarize_column(draws, ParamBlock::delta, j, level);
    PartyEffect e;
    e.index = j;
    e.motion_id = draws.motions[static_cast<std::size_t>(j)].id;
    e.mean = s.mean;
    e.sd = s.sd;
    e.ci_lower = s.ci_lower;
    e.ci_upper = s.ci_upper;
    e.significant = s.significant;
    if (s.ci_lower > 0.0) e.direction = IncentiveDirection::favor_group;
    else if (s.ci_upper < 0.0) e.direction = IncentiveDirection::against_group;
    e.closed_vote = draws.motion_yea_share(j) >= 0.35 && draws.motion_yea_share(j) <= 0.65;
    if (e.significant) ++report.significant_count;
    if (e.closed_vote) {
      ++report.closed_count;
      if (e.significant) ++report.significant_closed_count;
    }
    report.effects.push_back(std::move(e));
  }
  return report;
}

}  // namespace ideal
