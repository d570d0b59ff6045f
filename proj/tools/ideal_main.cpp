// Command-line frontend: fit, simulate, summarize, pivots, ppc, diagnose.
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ideal/analytics.hpp"
#include "ideal/artifacts.hpp"
#include "ideal/config.hpp"
#include "ideal/load.hpp"
#include "ideal/model.hpp"
#include "ideal/orient.hpp"
#include "ideal/party.hpp"
#include "ideal/sampler.hpp"
#include "ideal/synth.hpp"

namespace {

void print_error(const char* kind, const std::string& message) {
  nlohmann::json record;
  record["error"] = kind;
  record["message"] = message;
  std::cerr << record.dump() << "\n";
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ideal::ParseError& e) {
    print_error("parse", e.what());
    return 2;
  } catch (const ideal::ValidationError& e) {
    print_error("validation", e.what());
    return 2;
  } catch (const ideal::DomainError& e) {
    print_error("domain", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 1;
  }
}

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  bool quiet = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed override");
    cmd->add_option("--out", out, "output directory override");
    cmd->add_option("--threads", threads,
                    "worker threads for chain-level parallelism (1 = serial)");
    cmd->add_flag("--quiet", quiet, "suppress progress output");
  }
};

struct FitArgs {
  std::string config_path;
  std::optional<std::string> data;
  std::optional<std::string> format;
  std::optional<long> iterations;
  std::optional<long> burn_in;
  std::optional<long> thin;
  std::optional<int> chains;
  std::optional<int> d;
  CommonFlags common;
};

ideal::RunConfig resolve_fit_config(const FitArgs& args) {
  ideal::RunConfig cfg;
  if (!args.config_path.empty()) cfg = ideal::parse_run_config(args.config_path);
  if (args.data) cfg.data_path = *args.data;
  if (args.format) {
    ideal::apply_config_entry(cfg, "format", *args.format);
  }
  if (args.iterations) cfg.iterations = *args.iterations;
  if (args.burn_in) cfg.burn_in = *args.burn_in;
  if (args.thin) cfg.thin = *args.thin;
  if (args.chains) cfg.chains = *args.chains;
  if (args.d) cfg.d = *args.d;
  if (args.common.seed) cfg.seed = *args.common.seed;
  if (args.common.out) cfg.out_dir = *args.common.out;
  if (args.common.threads) cfg.threads = *args.common.threads;
  if (args.common.quiet) cfg.quiet = true;
  return cfg;
}

int cmd_fit(const FitArgs& args) {
  const ideal::RunConfig cfg = resolve_fit_config(args);
  if (cfg.data_path.empty()) {
    print_error("usage", "fit needs a data path (config key 'data' or --data)");
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();

  const ideal::RollCallMatrix raw = ideal::load_roll_calls(cfg.data_path, cfg.format);
  auto [matrix, filter_report] =
      ideal::filter_matrix(raw, cfg.min_participation, cfg.drop_unanimous);
  if (!cfg.quiet) {
    std::cout << "loaded " << raw.n << " x " << raw.m << ", filtered to "
              << matrix.n << " x " << matrix.m << " ("
              << filter_report.dropped_legislators.size() << " legislators, "
              << filter_report.dropped_motions.size() << " motions dropped)\n";
  }

  const ideal::AnchorSpec anchors = cfg.anchor_spec();
  const ideal::AnchorValidation anchor_check =
      ideal::validate_anchors(matrix, anchors, cfg.d);
  for (const auto& w : anchor_check.warnings) {
    if (!cfg.quiet) std::cout << "warning: " << w << "\n";
  }

  const ideal::Hyperparameters hyper =
      ideal::default_hyperparameters(matrix.n, cfg.d, cfg.sigma2);
  const ideal::SamplerConfig sampler_cfg = cfg.sampler_config();

  ideal::PosteriorDraws draws;
  if (cfg.party) {
    const Eigen::VectorXd D = ideal::resolve_group_indicator(cfg, matrix);
    ideal::DeltaPrior prior;
    prior.mean = cfg.delta_prior_mean;
    prior.variance = cfg.delta_prior_variance;
    draws = ideal::run_gibbs_party(matrix, hyper, anchors, D, sampler_cfg, prior);
  } else {
    draws = ideal::run_gibbs(matrix, hyper, anchors, sampler_cfg);
  }

  if (!cfg.orient_reference.empty()) {
    std::vector<int> sign = cfg.orient_sign;
    if (sign.empty()) sign.assign(static_cast<std::size_t>(cfg.d), 1);
    draws = ideal::orient_draws(draws, cfg.orient_reference, sign);
  }

  const std::filesystem::path out_dir = cfg.out_dir;
  // identical re-run detection before anything is overwritten
  if (std::filesystem::exists(out_dir / "manifest.txt")) {
    try {
      if (ideal::same_run(ideal::read_manifest(out_dir), ideal::build_manifest(draws))) {
        std::cout << "note: identical run already recorded in " << out_dir
                  << " (config and data digest match)\n";
      }
    } catch (const std::exception&) {
      // unreadable previous manifest; overwrite it
    }
  }

  ideal::Manifest extra;
  extra["filter_min_participation"] = ideal::detail::fmt_double(cfg.min_participation);
  extra["filter_drop_unanimous"] = cfg.drop_unanimous ? "1" : "0";
  extra["data_path"] = cfg.data_path;
  ideal::write_posterior_draws(out_dir, draws, extra);
  ideal::write_filter_report(out_dir, filter_report);

  const auto summaries = ideal::summarize(draws, cfg.ci_level);
  ideal::write_summaries(out_dir, summaries);
  ideal::write_ideal_point_plot(out_dir, draws, summaries);
  const auto diagnostics = ideal::convergence_diagnostics(draws);
  ideal::write_convergence(out_dir, diagnostics);
  if (cfg.party) {
    ideal::write_party_effects(out_dir, ideal::party_effect_report(draws, cfg.ci_level));
  }

  if (!cfg.quiet) {
    double max_rhat = 0.0;
    long flagged = 0;
    for (const auto& s : diagnostics) {
      if (s.not_applicable) continue;
      max_rhat = std::max(max_rhat, s.rhat);
      if (s.rhat >= 1.1) ++flagged;
    }
    const ideal::DiscriminationReport disc =
        ideal::discrimination_significance(summaries);
    std::cout << "parameters: " << draws.parameter_count() << " ("
              << draws.n_free() << " free ideal points, " << draws.m
              << " motions)\n"
              << "retained draws: " << draws.total_retained() << " across "
              << draws.chains.size() << " chains\n"
              << "max split-chain scale reduction: " << max_rhat << " ("
              << flagged << " parameters >= 1.1)\n"
              << "significant discrimination: " << disc.count_significant << "/"
              << disc.motions << "\n"
              << "wall time: " << draws.wall_time_sec << " s\n"
              << "artifacts written to " << out_dir << "\n";
    for (const auto& w : draws.warnings) std::cout << "warning: " << w << "\n";
  }
  (void)t0;
  return 0;
}

struct SimulateArgs {
  ideal::SynthSpec spec;
  CommonFlags common;
};

int cmd_simulate(const SimulateArgs& args) {
  ideal::SynthSpec spec = args.spec;
  if (args.common.seed) spec.seed = *args.common.seed;
  const std::filesystem::path out_dir =
      args.common.out ? *args.common.out : std::string("synth_out");
  const ideal::SynthResult sim = ideal::simulate(spec);
  std::filesystem::create_directories(out_dir);
  ideal::write_roll_calls_csv(out_dir / "votes.csv", sim.matrix);
  ideal::write_truth(out_dir, sim.truth, sim.matrix.legislators, sim.matrix.motions);
  if (!args.common.quiet) {
    std::cout << "simulated " << spec.n << " x " << spec.m << " votes into "
              << out_dir << "\n";
    if (!sim.regenerated_columns.empty()) {
      std::cout << "note: " << sim.regenerated_columns.size()
                << " columns redrawn to avoid unanimity\n";
    }
  }
  return 0;
}

struct SummarizeArgs {
  std::string draws_dir;
  double level = 0.95;
  std::string truth_beta;
  CommonFlags common;
};

int cmd_summarize(const SummarizeArgs& args) {
  const ideal::PosteriorDraws draws = ideal::read_posterior_draws(args.draws_dir);
  const std::filesystem::path out_dir =
      args.common.out ? *args.common.out : args.draws_dir;
  const auto summaries = ideal::summarize(draws, args.level);
  ideal::write_summaries(out_dir, summaries);
  ideal::write_ideal_point_plot(out_dir, draws, summaries);
  const ideal::DiscriminationReport disc = ideal::discrimination_significance(summaries);
  if (!args.common.quiet) {
    std::cout << "significant discrimination: " << disc.count_significant << "/"
              << disc.motions << " (" << 100.0 * disc.fraction << "%)\n";
  }

  if (!args.truth_beta.empty()) {
    // recovery correlation against a truth_beta.csv file
    std::ifstream in(args.truth_beta);
    if (!in) throw ideal::ValidationError("cannot open truth file: " + args.truth_beta);
    std::map<std::string, double> truth;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = ideal::detail::csv_fields(line);
      if (f.size() < 4) throw ideal::ValidationError("truth file: bad row");
      if (f[1] != "0") continue;  // first dimension only
      truth[f[2]] = std::stod(f[3]);
    }
    Eigen::VectorXd t(draws.n), m(draws.n);
    for (int i = 0; i < draws.n; ++i) {
      const auto it = truth.find(draws.legislators[static_cast<std::size_t>(i)].id);
      if (it == truth.end()) {
        throw ideal::ValidationError("truth file missing legislator " +
                                     draws.legislators[static_cast<std::size_t>(i)].id);
      }
      t(i) = it->second;
      m(i) = draws.pooled(ideal::ParamBlock::beta, i * draws.d).mean();
    }
    const Eigen::ArrayXd ct = t.array() - t.mean();
    const Eigen::ArrayXd cm = m.array() - m.mean();
    const double denom = std::sqrt(ct.square().sum() * cm.square().sum());
    const double corr = denom > 0.0 ? std::abs((ct * cm).sum() / denom) : 0.0;
    std::ofstream rec(out_dir / "recovery.txt");
    rec << "sign_aligned_correlation = " << ideal::detail::fmt_double(corr) << "\n"
        << "legislators = " << draws.n << "\n";
    std::cout << "sign-aligned recovery correlation: " << corr << "\n";
  }
  return 0;
}

struct PivotArgs {
  std::string draws_dir;
  std::vector<int> ranks;
  CommonFlags common;
};

int cmd_pivots(const PivotArgs& args) {
  const ideal::PosteriorDraws draws = ideal::read_posterior_draws(args.draws_dir);
  const std::filesystem::path out_dir =
      args.common.out ? *args.common.out : args.draws_dir;
  const auto reports = ideal::pivot_analysis(draws, args.ranks);
  ideal::write_pivot_reports(out_dir, reports);
  if (!args.common.quiet) {
    for (const auto& rep : reports) {
      std::cout << "rank " << rep.rank << ": ";
      const std::size_t show = std::min<std::size_t>(3, rep.counts.size());
      for (std::size_t k = 0; k < show; ++k) {
        if (k > 0) std::cout << ", ";
        std::cout << rep.counts[k].first << " ("
                  << 100.0 * static_cast<double>(rep.counts[k].second) /
                         static_cast<double>(rep.draws_used)
                  << "%)";
      }
      std::cout << "\n";
      if (rep.tie_events > 0) {
        std::cout << "note: " << rep.tie_events
                  << " ties broken by legislator id order\n";
      }
    }
  }
  return 0;
}

struct PPCArgs {
  std::string draws_dir;
  std::string data_path;
  std::string format = "csv";
  std::vector<std::string> statistics;
  long replicates = 500;
  CommonFlags common;
};

int cmd_ppc(const PPCArgs& args) {
  const ideal::PosteriorDraws draws = ideal::read_posterior_draws(args.draws_dir);
  const std::filesystem::path out_dir =
      args.common.out ? *args.common.out : args.draws_dir;
  const ideal::DataFormat format =
      args.format == "json" ? ideal::DataFormat::json : ideal::DataFormat::csv;
  ideal::RollCallMatrix matrix = ideal::load_roll_calls(args.data_path, format);

  // accept either the fitted matrix or the raw file it was filtered from
  if (ideal::detail::data_digest(matrix) != draws.data_digest) {
    const ideal::Manifest mf = ideal::read_manifest(args.draws_dir);
    const auto it = mf.find("filter_min_participation");
    const auto it2 = mf.find("filter_drop_unanimous");
    if (it != mf.end() && it2 != mf.end()) {
      auto [filtered, report] =
          ideal::filter_matrix(matrix, std::stod(it->second), it2->second == "1");
      matrix = std::move(filtered);
    }
    if (ideal::detail::data_digest(matrix) != draws.data_digest) {
      throw ideal::ValidationError(
          "data file does not match the fitted matrix (digest mismatch)");
    }
  }

  const std::vector<std::string> stats =
      args.statistics.empty() ? ideal::ppc_statistic_names() : args.statistics;
  const std::uint64_t seed = args.common.seed ? *args.common.seed : 0;
  const auto reports =
      ideal::posterior_predictive_check(draws, matrix, stats, args.replicates, seed);
  ideal::write_ppc_reports(out_dir, reports);
  if (!args.common.quiet) {
    for (const auto& rep : reports) {
      std::cout << rep.statistic_name << ": observed " << rep.observed
                << ", p = " << rep.p_value
                << ((rep.p_value < 0.05 || rep.p_value > 0.95) ? "  (extreme)" : "")
                << "\n";
    }
  }
  return 0;
}

struct DiagnoseArgs {
  std::string draws_dir;
  CommonFlags common;
};

int cmd_diagnose(const DiagnoseArgs& args) {
  const ideal::PosteriorDraws draws = ideal::read_posterior_draws(args.draws_dir);
  const std::filesystem::path out_dir =
      args.common.out ? *args.common.out : args.draws_dir;
  const auto stats = ideal::convergence_diagnostics(draws);
  ideal::write_convergence(out_dir, stats);
  double max_rhat = 0.0, min_ess = std::numeric_limits<double>::max();
  long flagged = 0, constant = 0;
  for (const auto& s : stats) {
    if (s.not_applicable) {
      ++constant;
      continue;
    }
    max_rhat = std::max(max_rhat, s.rhat);
    min_ess = std::min(min_ess, s.ess);
    if (s.rhat >= 1.1) ++flagged;
  }
  if (!args.common.quiet) {
    std::cout << "parameters: " << stats.size() << " (" << constant
              << " constant)\n"
              << "max split-chain scale reduction: " << max_rhat << "\n"
              << "parameters with scale reduction >= 1.1: " << flagged << "\n"
              << "min effective sample size: " << min_ess << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian ideal point estimation from roll-call votes"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit the model end to end");
  fit->add_option("--config", fit_args.config_path, "key = value run configuration file");
  fit->add_option("--data", fit_args.data, "roll-call file (overrides config)");
  fit->add_option("--format", fit_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  fit->add_option("--iterations", fit_args.iterations, "sampler sweeps");
  fit->add_option("--burn-in", fit_args.burn_in, "discarded initial sweeps");
  fit->add_option("--thin", fit_args.thin, "retention stride");
  fit->add_option("--chains", fit_args.chains, "independent chains");
  fit->add_option("--d", fit_args.d, "latent dimension");
  fit_args.common.attach(fit);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "draw a synthetic roll-call matrix");
  sim->add_option("--n", sim_args.spec.n, "legislators");
  sim->add_option("--m", sim_args.spec.m, "motions");
  sim->add_option("--d", sim_args.spec.d, "latent dimension");
  sim->add_option("--alpha-scale", sim_args.spec.alpha_scale, "discrimination scale");
  sim->add_option("--mu-scale", sim_args.spec.mu_scale, "approval scale");
  sim->add_option("--missing-rate", sim_args.spec.missing_rate, "missing fraction");
  sim->add_option("--zero-alpha-fraction", sim_args.spec.zero_alpha_fraction,
                  "fraction of non-discriminating motions");
  sim_args.common.attach(sim);

  SummarizeArgs sum_args;
  auto* sum = app.add_subcommand("summarize", "posterior summaries from a draws directory");
  sum->add_option("--draws", sum_args.draws_dir, "fitted run directory")->required();
  sum->add_option("--level", sum_args.level, "credible level");
  sum->add_option("--truth", sum_args.truth_beta,
                  "truth_beta.csv for a recovery correlation");
  sum_args.common.attach(sum);

  PivotArgs pivot_args;
  auto* piv = app.add_subcommand("pivots", "rank-occupancy tables");
  piv->add_option("--draws", pivot_args.draws_dir, "fitted run directory")->required();
  piv->add_option("--ranks", pivot_args.ranks, "order statistics (1-based)")->required();
  pivot_args.common.attach(piv);

  PPCArgs ppc_args;
  auto* ppc = app.add_subcommand("ppc", "posterior predictive checks");
  ppc->add_option("--draws", ppc_args.draws_dir, "fitted run directory")->required();
  ppc->add_option("--data", ppc_args.data_path, "roll-call file")->required();
  ppc->add_option("--format", ppc_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  ppc->add_option("--stats", ppc_args.statistics, "statistic names");
  ppc->add_option("--replicates", ppc_args.replicates, "predictive replicates");
  ppc_args.common.attach(ppc);

  DiagnoseArgs diag_args;
  auto* diag = app.add_subcommand("diagnose", "convergence diagnostics");
  diag->add_option("--draws", diag_args.draws_dir, "fitted run directory")->required();
  diag_args.common.attach(diag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (fit->parsed()) return guarded([&] { return cmd_fit(fit_args); });
  if (sim->parsed()) return guarded([&] { return cmd_simulate(sim_args); });
  if (sum->parsed()) return guarded([&] { return cmd_summarize(sum_args); });
  if (piv->parsed()) return guarded([&] { return cmd_pivots(pivot_args); });
  if (ppc->parsed()) return guarded([&] { return cmd_ppc(ppc_args); });
  if (diag->parsed()) return guarded([&] { return cmd_diagnose(diag_args); });
  return 2;
}
