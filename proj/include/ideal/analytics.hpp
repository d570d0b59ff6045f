#pragma once

// Posterior summaries, discrimination significance counts, pivot-rank
// occupancy, posterior predictive checks, and convergence diagnostics.
//
// Conventions (fixed so downstream flags are deterministic):
//  * quantiles: linear interpolation between order statistics at
//    h = (N-1)q (the common "type 7" rule);
//  * credible intervals: equal-tailed on the pooled chains;
//  * significance: the interval excludes zero;
//  * PPC p-value: mean(replicate statistic >= observed statistic).

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ideal/errors.hpp"
#include "ideal/model.hpp"
#include "ideal/rng.hpp"
#include "ideal/sampler.hpp"

namespace ideal {

inline double empirical_quantile(std::vector<double> sorted_values, double q) {
  if (sorted_values.empty()) throw ValidationError("quantile of empty sample");
  const double h =
      (static_cast<double>(sorted_values.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  const double frac = h - std::floor(h);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

struct ParameterSummary {
  ParamBlock block = ParamBlock::mu;
  int index = 0;  // motion j or legislator i
  int dim = 0;
  std::string id;
  double mean = 0.0;
  double sd = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  bool significant = false;  // interval excludes zero
};

namespace detail {

inline ParameterSummary summarize_column(const PosteriorDraws& draws,
                                         ParamBlock block, int col,
                                         double level) {
  Eigen::VectorXd x = draws.pooled(block, col);
  ParameterSummary s;
  s.block = block;
  s.mean = x.mean();
  const double nn = static_cast<double>(x.size());
  s.sd = (x.size() > 1)
             ? std::sqrt((x.array() - s.mean).square().sum() / (nn - 1.0))
             : 0.0;
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  const double tail = 0.5 * (1.0 - level);
  s.ci_lower = empirical_quantile(v, tail);
  s.ci_upper = empirical_quantile(v, 1.0 - tail);
  s.significant = (s.ci_lower > 0.0) || (s.ci_upper < 0.0);
  return s;
}

}  // namespace detail

// Pooled-chain equal-tailed summaries for every parameter.
inline std::vector<ParameterSummary> summarize(const PosteriorDraws& draws,
                                               double level = 0.95) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ValidationError("credible level must lie in (0,1)");
  }
  if (draws.total_retained() < 100) {
    throw ValidationError("summaries need at least 100 retained draws");
  }
  std::vector<ParameterSummary> out;
  auto emit = [&](ParamBlock block, int count, int d, bool motion_ids) {
    for (int idx = 0; idx < count; ++idx) {
      for (int k = 0; k < d; ++k) {
        ParameterSummary s =
            detail::summarize_column(draws, block, idx * d + k, level);
        s.index = idx;
        s.dim = k;
        s.id = motion_ids ? draws.motions[static_cast<std::size_t>(idx)].id
                          : draws.legislators[static_cast<std::size_t>(idx)].id;
        out.push_back(std::move(s));
      }
    }
  };
  emit(ParamBlock::mu, draws.m, 1, true);
  emit(ParamBlock::alpha, draws.m, draws.d, true);
  emit(ParamBlock::beta, draws.n, draws.d, false);
  if (draws.has_delta) emit(ParamBlock::delta, draws.m, 1, true);
  return out;
}

struct DiscriminationReport {
  int motions = 0;
  int count_significant = 0;  // motions with any coordinate significant
  double fraction = 0.0;
  std::vector<int> per_dimension;
};

// Counts motions whose discrimination interval excludes zero; for d > 1 a
// motion counts when any coordinate does.
inline DiscriminationReport discrimination_significance(
    const std::vector<ParameterSummary>& summaries) {
  DiscriminationReport report;
  int max_dim = 0;
  std::map<int, bool> motion_significant;
  for (const auto& s : summaries) {
    if (s.block != ParamBlock::alpha) continue;
    max_dim = std::max(max_dim, s.dim + 1);
    motion_significant[s.index] = motion_significant[s.index] || s.significant;
  }
  if (motion_significant.empty()) {
    throw ValidationError("no discrimination summaries supplied");
  }
  report.per_dimension.assign(static_cast<std::size_t>(max_dim), 0);
  for (const auto& s : summaries) {
    if (s.block != ParamBlock::alpha || !s.significant) continue;
    ++report.per_dimension[static_cast<std::size_t>(s.dim)];
  }
  report.motions = static_cast<int>(motion_significant.size());
  for (const auto& [idx, sig] : motion_significant) {
    (void)idx;
    if (sig) ++report.count_significant;
  }
  report.fraction = static_cast<double>(report.count_significant) /
                    static_cast<double>(report.motions);
  return report;
}

struct PivotReport {
  int rank = 0;  // 1-based order statistic of the sorted ideal points
  std::vector<std::pair<std::string, long>> counts;  // id -> times at rank
  long draws_used = 0;
  long tie_events = 0;

  double probability(const std::string& id) const {
    for (const auto& [key, c] : counts) {
      if (key == id) {
        return static_cast<double>(c) / static_cast<double>(draws_used);
      }
    }
    return 0.0;
  }
};

// Sample/sort/rank occupancy of the requested order statistics (d = 1).
// Anchors take part with their fixed positions; ties break by legislator
// id order and are counted.
inline std::vector<PivotReport> pivot_analysis(const PosteriorDraws& draws,
                                               const std::vector<int>& ranks) {
  if (draws.d != 1) {
    throw UnsupportedError(
        "pivot_analysis requires d = 1 (project draws to one dimension first)");
  }
  if (ranks.empty()) throw ValidationError("no ranks requested");
  for (int r : ranks) {
    if (r < 1 || r > draws.n) {
      throw ValidationError("rank " + std::to_string(r) +
                            " outside 1.." + std::to_string(draws.n));
    }
  }

  // Tie-break permutation: position of each legislator in id order.
  std::vector<int> by_id(static_cast<std::size_t>(draws.n));
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), [&](int a, int b) {
    return draws.legislators[static_cast<std::size_t>(a)].id <
           draws.legislators[static_cast<std::size_t>(b)].id;
  });
  std::vector<int> id_rank(static_cast<std::size_t>(draws.n));
  for (int r = 0; r < draws.n; ++r) id_rank[static_cast<std::size_t>(by_id[static_cast<std::size_t>(r)])] = r;

  std::vector<PivotReport> reports;
  reports.reserve(ranks.size());
  std::vector<std::map<std::string, long>> counters(ranks.size());
  long tie_events = 0;
  long draws_used = 0;

  std::vector<int> order(static_cast<std::size_t>(draws.n));
  for (const auto& chain : draws.chains) {
    for (Eigen::Index row = 0; row < chain.beta.rows(); ++row) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double va = chain.beta(row, a);
        const double vb = chain.beta(row, b);
        if (va != vb) return va < vb;
        return id_rank[static_cast<std::size_t>(a)] < id_rank[static_cast<std::size_t>(b)];
      });
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        if (chain.beta(row, order[k]) == chain.beta(row, order[k + 1])) ++tie_events;
      }
      for (std::size_t q = 0; q < ranks.size(); ++q) {
        const int occupant = order[static_cast<std::size_t>(ranks[q] - 1)];
        ++counters[q][draws.legislators[static_cast<std::size_t>(occupant)].id];
      }
      ++draws_used;
    }
  }

  for (std::size_t q = 0; q < ranks.size(); ++q) {
    PivotReport rep;
    rep.rank = ranks[q];
    rep.draws_used = draws_used;
    rep.tie_events = tie_events;
    rep.counts.assign(counters[q].begin(), counters[q].end());
    std::sort(rep.counts.begin(), rep.counts.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    reports.push_back(std::move(rep));
  }
  return reports;
}

struct PPCReport {
  std::string statistic_name;
  double observed = 0.0;
  std::vector<double> predictive_draws;
  double p_value = 0.0;  // fraction of predictive draws >= observed
};

namespace detail {

struct PPCStatistic {
  std::string name;
  // votes uses the Vote codes; computed over observed cells only
  double (*eval)(const VoteGrid&);
};

inline double ppc_yea_rate(const VoteGrid& votes) {
  long yea = 0, obs = 0;
  for (Eigen::Index j = 0; j < votes.cols(); ++j) {
    for (Eigen::Index i = 0; i < votes.rows(); ++i) {
      if (votes(i, j) < 0) continue;
      ++obs;
      if (votes(i, j) == 1) ++yea;
    }
  }
  return obs > 0 ? static_cast<double>(yea) / static_cast<double>(obs) : 0.0;
}

inline double ppc_legislator_yea_sd(const VoteGrid& votes) {
  std::vector<double> rates;
  for (Eigen::Index i = 0; i < votes.rows(); ++i) {
    long yea = 0, obs = 0;
    for (Eigen::Index j = 0; j < votes.cols(); ++j) {
      if (votes(i, j) < 0) continue;
      ++obs;
      if (votes(i, j) == 1) ++yea;
    }
    if (obs > 0) rates.push_back(static_cast<double>(yea) / static_cast<double>(obs));
  }
  if (rates.size() < 2) return 0.0;
  const double mean =
      std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
  double ss = 0.0;
  for (double r : rates) ss += (r - mean) * (r - mean);
  return std::sqrt(ss / (static_cast<double>(rates.size()) - 1.0));
}

inline double ppc_close_margin_fraction(const VoteGrid& votes) {
  long close = 0, counted = 0;
  for (Eigen::Index j = 0; j < votes.cols(); ++j) {
    long yea = 0, obs = 0;
    for (Eigen::Index i = 0; i < votes.rows(); ++i) {
      if (votes(i, j) < 0) continue;
      ++obs;
      if (votes(i, j) == 1) ++yea;
    }
    if (obs == 0) continue;
    ++counted;
    const double share = static_cast<double>(yea) / static_cast<double>(obs);
    if (share >= 0.35 && share <= 0.65) ++close;
  }
  return counted > 0 ? static_cast<double>(close) / static_cast<double>(counted) : 0.0;
}

inline const std::vector<PPCStatistic>& ppc_registry() {
  static const std::vector<PPCStatistic> registry = {
      {"yea_rate", &ppc_yea_rate},
      {"legislator_yea_sd", &ppc_legislator_yea_sd},
      {"close_margin_fraction", &ppc_close_margin_fraction},
  };
  return registry;
}

}  // namespace detail

inline std::vector<std::string> ppc_statistic_names() {
  std::vector<std::string> names;
  for (const auto& s : detail::ppc_registry()) names.push_back(s.name);
  return names;
}

// Simulates replicate vote matrices at retained draws (Missing cells stay
// missing) and reports tail probabilities of the named test statistics.
inline std::vector<PPCReport> posterior_predictive_check(
    const PosteriorDraws& draws, const RollCallMatrix& matrix,
    const std::vector<std::string>& statistics, long replicates = 500,
    std::uint64_t seed = 0) {
  if (matrix.n != draws.n || matrix.m != draws.m) {
    throw ValidationError("matrix shape does not match the posterior draws");
  }
  if (draws.total_retained() < 200) {
    throw ValidationError("posterior predictive checks need >= 200 retained draws");
  }
  if (replicates < 200) {
    throw ValidationError("posterior predictive checks need >= 200 replicates");
  }
  replicates = std::min(replicates, draws.total_retained());

  std::vector<const detail::PPCStatistic*> stats;
  for (const auto& name : statistics) {
    const detail::PPCStatistic* found = nullptr;
    for (const auto& s : detail::ppc_registry()) {
      if (s.name == name) { found = &s; break; }
    }
    if (found == nullptr) throw ValidationError("unknown PPC statistic: " + name);
    stats.push_back(found);
  }
  if (stats.empty()) throw ValidationError("no PPC statistics requested");

  std::vector<PPCReport> reports(stats.size());
  for (std::size_t s = 0; s < stats.size(); ++s) {
    reports[s].statistic_name = stats[s]->name;
    reports[s].observed = stats[s]->eval(matrix.votes);
    reports[s].predictive_draws.reserve(static_cast<std::size_t>(replicates));
  }

  const long pooled = draws.total_retained();
  const long per_chain = draws.retained_per_chain();
  Rng rng = Rng::substream(seed, 0x9ccu);
  VoteGrid rep(matrix.n, matrix.m);
  for (long r = 0; r < replicates; ++r) {
    const long pos = (r * pooled) / replicates;  // evenly spaced across chains
    const int chain = static_cast<int>(pos / per_chain);
    const long row = pos % per_chain;
    const ChainDraws& cd = draws.chains[static_cast<std::size_t>(chain)];

    for (int j = 0; j < matrix.m; ++j) {
      for (int i = 0; i < matrix.n; ++i) {
        if (!matrix.observed(i, j)) {
          rep(i, j) = -1;
          continue;
        }
        double theta = cd.mu(row, j);
        for (int k = 0; k < draws.d; ++k) {
          theta += cd.alpha(row, j * draws.d + k) * cd.beta(row, i * draws.d + k);
        }
        if (draws.has_delta) theta += cd.delta(row, j) * draws.group_indicator(i);
        rep(i, j) = (rng.uniform_open() < norm_cdf(theta)) ? 1 : 0;
      }
    }
    for (std::size_t s = 0; s < stats.size(); ++s) {
      reports[s].predictive_draws.push_back(stats[s]->eval(rep));
    }
  }

  for (auto& report : reports) {
    long ge = 0;
    for (double v : report.predictive_draws) {
      if (v >= report.observed) ++ge;
    }
    report.p_value = static_cast<double>(ge) /
                     static_cast<double>(report.predictive_draws.size());
  }
  return reports;
}

struct ConvergenceStat {
  ParamBlock block = ParamBlock::mu;
  int index = 0;
  int dim = 0;
  std::string id;
  double rhat = 0.0;
  double ess = 0.0;
  bool not_applicable = false;  // zero-variance parameter (e.g. anchors)
};

namespace detail {

// Split-chain potential scale reduction and variogram-based effective
// sample size on the split sequences.
inline void rhat_ess_column(const std::vector<Eigen::VectorXd>& sequences,
                            double& rhat, double& ess, bool& not_applicable) {
  const std::size_t S = sequences.size();
  const Eigen::Index len = sequences[0].size();
  const double nd = static_cast<double>(len);

  double w_sum = 0.0;
  std::vector<double> means(S);
  for (std::size_t s = 0; s < S; ++s) {
    means[s] = sequences[s].mean();
    w_sum += (sequences[s].array() - means[s]).square().sum() / (nd - 1.0);
  }
  const double W = w_sum / static_cast<double>(S);
  double grand = std::accumulate(means.begin(), means.end(), 0.0) /
                 static_cast<double>(S);
  double b_over_n = 0.0;
  for (double mval : means) b_over_n += (mval - grand) * (mval - grand);
  b_over_n /= static_cast<double>(S - 1);
  const double var_plus = (nd - 1.0) / nd * W + b_over_n;

  if (!(var_plus > 0.0) || !(W > 0.0)) {
    not_applicable = true;
    rhat = std::numeric_limits<double>::quiet_NaN();
    ess = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  not_applicable = false;
  rhat = std::sqrt(var_plus / W);

  // rho_t = 1 - V_t / (2 var_plus), variogram over the split sequences;
  // accumulate with Geyer's initial-positive-pair truncation.
  const double total = static_cast<double>(S) * nd;
  double tau = 1.0;
  double prev_pair = std::numeric_limits<double>::max();
  for (Eigen::Index t = 1; t + 1 < len; t += 2) {
    auto rho_at = [&](Eigen::Index lag) {
      double vt = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        const auto& x = sequences[s];
        double acc = 0.0;
        for (Eigen::Index l = lag; l < len; ++l) {
          const double dlt = x(l) - x(l - lag);
          acc += dlt * dlt;
        }
        vt += acc / static_cast<double>(len - lag);
      }
      vt /= static_cast<double>(S);
      return 1.0 - vt / (2.0 * var_plus);
    };
    const double pair = rho_at(t) + rho_at(t + 1);
    if (pair < 0.0) break;
    const double capped = std::min(pair, prev_pair);  // enforce monotone decay
    tau += 2.0 * capped;
    prev_pair = capped;
  }
  ess = std::min(total / tau, total);
}

}  // namespace detail

// Per-parameter split-chain scale reduction and effective sample size.
inline std::vector<ConvergenceStat> convergence_diagnostics(
    const PosteriorDraws& draws) {
  const long per_chain = draws.retained_per_chain();
  const int chains = static_cast<int>(draws.chains.size());
  if (chains < 2 && per_chain < 200) {
    throw ValidationError(
        "split-chain diagnostics need >= 2 chains or >= 200 draws per chain");
  }
  const long half = per_chain / 2;
  if (half < 2) throw ValidationError("too few retained draws to split chains");

  std::vector<ConvergenceStat> out;
  auto run_block = [&](ParamBlock block, int count, int d, bool motion_ids) {
    std::vector<Eigen::VectorXd> sequences(static_cast<std::size_t>(2 * chains));
    for (int idx = 0; idx < count; ++idx) {
      for (int k = 0; k < d; ++k) {
        const int col = idx * d + k;
        for (int c = 0; c < chains; ++c) {
          const auto& mat = draws.block(c, block);
          sequences[static_cast<std::size_t>(2 * c)] = mat.col(col).head(half);
          sequences[static_cast<std::size_t>(2 * c + 1)] =
              mat.col(col).segment(per_chain - half, half);
        }
        ConvergenceStat stat;
        stat.block = block;
        stat.index = idx;
        stat.dim = k;
        stat.id = motion_ids ? draws.motions[static_cast<std::size_t>(idx)].id
                             : draws.legislators[static_cast<std::size_t>(idx)].id;
        detail::rhat_ess_column(sequences, stat.rhat, stat.ess, stat.not_applicable);
        out.push_back(std::move(stat));
      }
    }
  };
  run_block(ParamBlock::mu, draws.m, 1, true);
  run_block(ParamBlock::alpha, draws.m, draws.d, true);
  run_block(ParamBlock::beta, draws.n, draws.d, false);
  if (draws.has_delta) run_block(ParamBlock::delta, draws.m, 1, true);
  return out;
}

}  // namespace ideal
