#pragma once

// On-disk run artifacts.
//
// A fitted run directory holds:
//   mu.csv / delta.csv      chain,iteration,index,value
//   alpha.csv / beta.csv    chain,iteration,index,dim,value
//   legislators.csv, motions.csv   index metadata (+ anchor/group columns)
//   manifest.txt            key = value echo of config, seed, digests
// plus report files written by the analytics commands. Doubles are printed
// with %.17g so a reload reproduces the draws bit for bit.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ideal/analytics.hpp"
#include "ideal/data.hpp"
#include "ideal/errors.hpp"
#include "ideal/party.hpp"
#include "ideal/sampler.hpp"

namespace ideal {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw ValidationError("cannot write file: " + p.string());
  return out;
}

}  // namespace detail

inline std::string format_digest(std::uint64_t digest) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, digest);
  return buf;
}

// ---- manifest -------------------------------------------------------------

using Manifest = std::map<std::string, std::string>;

inline Manifest build_manifest(const PosteriorDraws& draws) {
  Manifest mf;
  mf["format_version"] = "1";
  mf["seed"] = std::to_string(draws.config.seed);
  mf["iterations"] = std::to_string(draws.config.iterations);
  mf["burn_in"] = std::to_string(draws.config.burn_in);
  mf["thin"] = std::to_string(draws.config.thin);
  mf["chains"] = std::to_string(draws.config.chains);
  mf["d"] = std::to_string(draws.d);
  mf["threads"] = std::to_string(draws.config.threads);
  mf["n"] = std::to_string(draws.n);
  mf["m"] = std::to_string(draws.m);
  mf["n_free"] = std::to_string(draws.n_free());
  mf["parameter_count"] = std::to_string(draws.parameter_count());
  mf["retained_per_chain"] = std::to_string(draws.retained_per_chain());
  mf["data_digest"] = format_digest(draws.data_digest);
  mf["party"] = draws.has_delta ? "1" : "0";
  if (draws.has_delta) {
    mf["delta_prior_mean"] = detail::fmt_double(draws.delta_prior_mean);
    mf["delta_prior_variance"] = detail::fmt_double(draws.delta_prior_variance);
  }
  {
    std::string spec;
    for (const auto& a : draws.anchors.anchors) {
      if (!spec.empty()) spec += ";";
      spec += a.legislator_id + ":";
      for (Eigen::Index k = 0; k < a.position.size(); ++k) {
        if (k > 0) spec += "|";
        spec += detail::fmt_double(a.position(k));
      }
    }
    mf["anchors"] = spec;
  }
  mf["wall_time_sec"] = detail::fmt_double(draws.wall_time_sec);
  mf["acceptance"] = draws.acceptance_note;
  mf["jitter_events"] = std::to_string(draws.jitter_events);
  mf["warning_count"] = std::to_string(draws.warnings.size());
  for (std::size_t w = 0; w < draws.warnings.size(); ++w) {
    mf["warning_" + std::to_string(w)] = draws.warnings[w];
  }
  return mf;
}

inline void write_manifest(const std::filesystem::path& dir, const Manifest& mf) {
  auto out = detail::open_out(dir / "manifest.txt");
  for (const auto& [k, v] : mf) out << k << " = " << v << "\n";
}

inline Manifest read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.txt");
  if (!in) throw ValidationError("cannot open manifest: " + (dir / "manifest.txt").string());
  Manifest mf;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    mf[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return mf;
}

// A re-run is "identical" when the config echo and data digest both match.
inline bool same_run(const Manifest& a, const Manifest& b) {
  static const char* keys[] = {"seed",   "iterations", "burn_in", "thin",
                               "chains", "d",          "n",       "m",
                               "data_digest", "party", "anchors"};
  for (const char* k : keys) {
    auto ita = a.find(k);
    auto itb = b.find(k);
    if (ita == a.end() || itb == b.end() || ita->second != itb->second) return false;
  }
  return true;
}

// ---- draw files -----------------------------------------------------------

inline void write_posterior_draws(const std::filesystem::path& dir,
                                  const PosteriorDraws& draws,
                                  const Manifest& extra = {}) {
  std::filesystem::create_directories(dir);

  auto write_indexed = [&](const char* filename, ParamBlock block, int count) {
    auto out = detail::open_out(dir / filename);
    out << "chain,iteration,index,value\n";
    for (std::size_t c = 0; c < draws.chains.size(); ++c) {
      const auto& mat = draws.block(static_cast<int>(c), block);
      const auto& iters = draws.chains[c].iteration;
      for (Eigen::Index row = 0; row < mat.rows(); ++row) {
        for (int idx = 0; idx < count; ++idx) {
          out << c << ',' << iters[static_cast<std::size_t>(row)] << ',' << idx
              << ',' << detail::fmt_double(mat(row, idx)) << "\n";
        }
      }
    }
  };
  auto write_dimensioned = [&](const char* filename, ParamBlock block, int count) {
    auto out = detail::open_out(dir / filename);
    out << "chain,iteration,index,dim,value\n";
    for (std::size_t c = 0; c < draws.chains.size(); ++c) {
      const auto& mat = draws.block(static_cast<int>(c), block);
      const auto& iters = draws.chains[c].iteration;
      for (Eigen::Index row = 0; row < mat.rows(); ++row) {
        for (int idx = 0; idx < count; ++idx) {
          for (int k = 0; k < draws.d; ++k) {
            out << c << ',' << iters[static_cast<std::size_t>(row)] << ',' << idx
                << ',' << k << ','
                << detail::fmt_double(mat(row, idx * draws.d + k)) << "\n";
          }
        }
      }
    }
  };

  write_indexed("mu.csv", ParamBlock::mu, draws.m);
  write_dimensioned("alpha.csv", ParamBlock::alpha, draws.m);
  write_dimensioned("beta.csv", ParamBlock::beta, draws.n);
  if (draws.has_delta) write_indexed("delta.csv", ParamBlock::delta, draws.m);

  {
    auto out = detail::open_out(dir / "legislators.csv");
    out << "index,id,name,party,group,anchored,anchor_position,group_indicator\n";
    for (int i = 0; i < draws.n; ++i) {
      const auto& l = draws.legislators[static_cast<std::size_t>(i)];
      const Anchor* a = draws.anchors.find(l.id);
      std::string pos;
      if (a != nullptr) {
        for (Eigen::Index k = 0; k < a->position.size(); ++k) {
          if (k > 0) pos += "|";
          pos += detail::fmt_double(a->position(k));
        }
      }
      out << i << ',' << l.id << ',' << l.name << ',' << l.party << ','
          << l.group << ',' << (a != nullptr ? 1 : 0) << ',' << pos << ','
          << (draws.has_delta ? detail::fmt_double(draws.group_indicator(i)) : "")
          << "\n";
    }
  }
  {
    auto out = detail::open_out(dir / "motions.csv");
    out << "index,id,label,topic,sponsor_flag,yea_share\n";
    for (int j = 0; j < draws.m; ++j) {
      const auto& mo = draws.motions[static_cast<std::size_t>(j)];
      out << j << ',' << mo.id << ',' << mo.label << ',' << mo.topic << ','
          << (mo.sponsor_flag ? std::to_string(*mo.sponsor_flag) : "") << ','
          << detail::fmt_double(draws.motion_yea_share(j)) << "\n";
    }
  }
  Manifest mf = build_manifest(draws);
  for (const auto& [k, v] : extra) mf[k] = v;
  write_manifest(dir, mf);
}

inline PosteriorDraws read_posterior_draws(const std::filesystem::path& dir) {
  const Manifest mf = read_manifest(dir);
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = mf.find(key);
    if (it == mf.end()) throw ValidationError("manifest missing key: " + key);
    return it->second;
  };

  PosteriorDraws draws;
  draws.n = std::stoi(need("n"));
  draws.m = std::stoi(need("m"));
  draws.d = std::stoi(need("d"));
  draws.config.seed = std::stoull(need("seed"));
  draws.config.iterations = std::stol(need("iterations"));
  draws.config.burn_in = std::stol(need("burn_in"));
  draws.config.thin = std::stol(need("thin"));
  draws.config.chains = std::stoi(need("chains"));
  draws.config.d = draws.d;
  draws.has_delta = need("party") == "1";
  if (draws.has_delta) {
    draws.delta_prior_mean = std::stod(need("delta_prior_mean"));
    draws.delta_prior_variance = std::stod(need("delta_prior_variance"));
  }
  draws.data_digest = std::stoull(need("data_digest"), nullptr, 16);
  draws.wall_time_sec = std::stod(need("wall_time_sec"));
  draws.jitter_events = std::stol(need("jitter_events"));
  if (auto it = mf.find("acceptance"); it != mf.end()) draws.acceptance_note = it->second;
  const std::size_t warning_count = std::stoul(need("warning_count"));
  for (std::size_t w = 0; w < warning_count; ++w) {
    if (auto it = mf.find("warning_" + std::to_string(w)); it != mf.end()) {
      draws.warnings.push_back(it->second);
    }
  }
  const int chains = draws.config.chains;
  const long retained = std::stol(need("retained_per_chain"));

  // legislators.csv carries anchors and the group indicator
  {
    std::ifstream in(dir / "legislators.csv");
    if (!in) throw ValidationError("cannot open legislators.csv in " + dir.string());
    std::string line;
    std::getline(in, line);
    if (draws.has_delta) draws.group_indicator.resize(draws.n);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = detail::csv_fields(line);
      if (f.size() < 8) throw ValidationError("legislators.csv: bad row");
      LegislatorMeta leg{f[1], f[2], f[3], f[4]};
      const int idx = std::stoi(f[0]);
      draws.legislators.push_back(leg);
      if (f[5] == "1") {
        Anchor a;
        a.legislator_id = leg.id;
        std::vector<double> coords;
        std::stringstream ss(f[6]);
        std::string piece;
        while (std::getline(ss, piece, '|')) coords.push_back(std::stod(piece));
        a.position = Eigen::Map<Eigen::VectorXd>(coords.data(),
                                                 static_cast<Eigen::Index>(coords.size()));
        draws.anchors.anchors.push_back(std::move(a));
      }
      if (draws.has_delta) draws.group_indicator(idx) = std::stod(f[7]);
    }
  }
  {
    std::ifstream in(dir / "motions.csv");
    if (!in) throw ValidationError("cannot open motions.csv in " + dir.string());
    std::string line;
    std::getline(in, line);
    draws.motion_yea_share.resize(draws.m);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = detail::csv_fields(line);
      if (f.size() < 6) throw ValidationError("motions.csv: bad row");
      MotionMeta mo;
      mo.id = f[1];
      mo.label = f[2];
      mo.topic = f[3];
      if (!f[4].empty()) mo.sponsor_flag = std::stoi(f[4]);
      draws.motions.push_back(std::move(mo));
      draws.motion_yea_share(std::stoi(f[0])) = std::stod(f[5]);
    }
  }

  draws.chains.resize(static_cast<std::size_t>(chains));
  for (auto& c : draws.chains) {
    c.mu.resize(retained, draws.m);
    c.alpha.resize(retained, draws.m * draws.d);
    c.beta.resize(retained, draws.n * draws.d);
    if (draws.has_delta) c.delta.resize(retained, draws.m);
    c.iteration.assign(static_cast<std::size_t>(retained), 0);
  }

  // Rows are written draw-major; reconstruct by counting iteration changes.
  auto read_block = [&](const char* filename, ParamBlock block, bool with_dim) {
    std::ifstream in(dir / filename);
    if (!in) throw ValidationError(std::string("cannot open ") + filename);
    std::string line;
    std::getline(in, line);
    std::vector<long> rows_seen(static_cast<std::size_t>(chains), -1);
    std::vector<long> prev_iter(static_cast<std::size_t>(chains), -1);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = detail::csv_fields(line);
      const int c = std::stoi(f[0]);
      const long iter = std::stol(f[1]);
      const int idx = std::stoi(f[2]);
      const int dim = with_dim ? std::stoi(f[3]) : 0;
      const double v = std::stod(f[with_dim ? 4 : 3]);
      auto& seen = rows_seen[static_cast<std::size_t>(c)];
      auto& prev = prev_iter[static_cast<std::size_t>(c)];
      if (iter != prev) {
        ++seen;
        prev = iter;
      }
      draws.block_mut(c, block)(seen, idx * (with_dim ? draws.d : 1) + dim) = v;
      draws.chains[static_cast<std::size_t>(c)].iteration[static_cast<std::size_t>(seen)] = iter;
    }
  };

  read_block("mu.csv", ParamBlock::mu, false);
  read_block("alpha.csv", ParamBlock::alpha, true);
  read_block("beta.csv", ParamBlock::beta, true);
  if (draws.has_delta) read_block("delta.csv", ParamBlock::delta, false);
  return draws;
}

// ---- report files ----------------------------------------------------------

inline const char* block_name(ParamBlock b) {
  switch (b) {
    case ParamBlock::mu: return "mu";
    case ParamBlock::alpha: return "alpha";
    case ParamBlock::beta: return "beta";
    default: return "delta";
  }
}

inline void write_filter_report(const std::filesystem::path& dir,
                                const FilterReport& report) {
  std::filesystem::create_directories(dir);
  auto out = detail::open_out(dir / "filter_report.csv");
  out << "kind,id,detail\n";
  out << "counts,n," << report.n_before << "->" << report.n_after << "\n";
  out << "counts,m," << report.m_before << "->" << report.m_after << "\n";
  for (const auto& [id, participation] : report.dropped_legislators) {
    out << "legislator," << id << ',' << detail::fmt_double(participation) << "\n";
  }
  for (const auto& [id, reason] : report.dropped_motions) {
    out << "motion," << id << ','
        << (reason == MotionDropReason::unanimous ? "unanimous" : "all-missing")
        << "\n";
  }
}

inline void write_summaries(const std::filesystem::path& dir,
                            const std::vector<ParameterSummary>& summaries) {
  std::filesystem::create_directories(dir);
  auto out = detail::open_out(dir / "summary.csv");
  out << "block,index,dim,id,mean,sd,ci_lower,ci_upper,significant\n";
  for (const auto& s : summaries) {
    out << block_name(s.block) << ',' << s.index << ',' << s.dim << ',' << s.id
        << ',' << detail::fmt_double(s.mean) << ',' << detail::fmt_double(s.sd)
        << ',' << detail::fmt_double(s.ci_lower) << ','
        << detail::fmt_double(s.ci_upper) << ',' << (s.significant ? 1 : 0)
        << "\n";
  }
}

// Long-format ideal-point table ordered by posterior mean (caterpillar-ready).
inline void write_ideal_point_plot(const std::filesystem::path& dir,
                                   const PosteriorDraws& draws,
                                   const std::vector<ParameterSummary>& summaries) {
  std::filesystem::create_directories(dir);
  std::vector<const ParameterSummary*> beta;
  for (const auto& s : summaries) {
    if (s.block == ParamBlock::beta && s.dim == 0) beta.push_back(&s);
  }
  std::sort(beta.begin(), beta.end(),
            [](const ParameterSummary* a, const ParameterSummary* b) {
              return a->mean < b->mean;
            });
  auto out = detail::open_out(dir / "ideal_points_plot.csv");
  out << "rank,legislator_id,party,group,anchored,mean,ci_lower,ci_upper,significant\n";
  long rank = 1;
  for (const ParameterSummary* s : beta) {
    const auto& leg = draws.legislators[static_cast<std::size_t>(s->index)];
    out << rank++ << ',' << leg.id << ',' << leg.party << ',' << leg.group << ','
        << (draws.is_anchored(s->index) ? 1 : 0) << ','
        << detail::fmt_double(s->mean) << ',' << detail::fmt_double(s->ci_lower)
        << ',' << detail::fmt_double(s->ci_upper) << ',' << (s->significant ? 1 : 0)
        << "\n";
  }
}

inline void write_pivot_reports(const std::filesystem::path& dir,
                                const std::vector<PivotReport>& reports) {
  std::filesystem::create_directories(dir);
  auto out = detail::open_out(dir / "occupancy.csv");
  out << "rank,legislator_id,count,probability,draws_used,tie_events\n";
  for (const auto& rep : reports) {
    for (const auto& [id, count] : rep.counts) {
      out << rep.rank << ',' << id << ',' << count << ','
          << detail::fmt_double(static_cast<double>(count) /
                                static_cast<double>(rep.draws_used))
          << ',' << rep.draws_used << ',' << rep.tie_events << "\n";
    }
  }
}

inline void write_ppc_reports(const std::filesystem::path& dir,
                              const std::vector<PPCReport>& reports) {
  std::filesystem::create_directories(dir);
  auto out = detail::open_out(dir / "ppc.csv");
  out << "statistic,observed,p_value,replicates\n";
  for (const auto& rep : reports) {
    out << rep.statistic_name << ',' << detail::fmt_double(rep.observed) << ','
        << detail::fmt_double(rep.p_value) << ',' << rep.predictive_draws.size()
        << "\n";
  }
}

inline void write_convergence(const std::filesystem::path& dir,
                              const std::vector<ConvergenceStat>& stats) {
  std::filesystem::create_directories(dir);
  auto out = detail::open_out(dir / "diagnostics.csv");
  out << "block,index,dim,id,rhat,ess,flag\n";
  for (const auto& s : stats) {
    out << block_name(s.block) << ',' << s.index << ',' << s.dim << ',' << s.id
        << ',' << (s.not_applicable ? "" : detail::fmt_double(s.rhat)) << ','
        << (s.not_applicable ? "" : detail::fmt_double(s.ess)) << ','
        << (s.not_applicable ? "constant" : "") << "\n";
  }
}

inline void write_party_effects(const std::filesystem::path& dir,
                                const PartyEffectReport& report) {
  std::filesystem::create_directories(dir);
  auto out = detail::open_out(dir / "party_effects.csv");
  out << "index,motion_id,mean,sd,ci_lower,ci_upper,significant,direction,closed_vote\n";
  for (const auto& e : report.effects) {
    out << e.index << ',' << e.motion_id << ',' << detail::fmt_double(e.mean)
        << ',' << detail::fmt_double(e.sd) << ',' << detail::fmt_double(e.ci_lower)
        << ',' << detail::fmt_double(e.ci_upper) << ',' << (e.significant ? 1 : 0)
        << ',' << to_string(e.direction) << ',' << (e.closed_vote ? 1 : 0) << "\n";
  }
}

// Matrix writer mirroring the CSV input schema (used by the simulator).
inline void write_roll_calls_csv(const std::filesystem::path& path,
                                 const RollCallMatrix& matrix) {
  auto out = detail::open_out(path);
  out << "legislator_id,party,group";
  for (const auto& mo : matrix.motions) out << ',' << mo.id;
  out << "\n";
  for (int i = 0; i < matrix.n; ++i) {
    const auto& l = matrix.legislators[static_cast<std::size_t>(i)];
    out << l.id << ',' << l.party << ',' << l.group;
    for (int j = 0; j < matrix.m; ++j) {
      const auto v = matrix.votes(i, j);
      out << ',' << (v < 0 ? "NA" : (v == 1 ? "1" : "0"));
    }
    out << "\n";
  }
}

inline void write_truth(const std::filesystem::path& dir,
                        const ModelParameters& truth,
                        const std::vector<LegislatorMeta>& legislators,
                        const std::vector<MotionMeta>& motions) {
  std::filesystem::create_directories(dir);
  {
    auto out = detail::open_out(dir / "truth_mu.csv");
    out << "index,id,value\n";
    for (int j = 0; j < truth.m(); ++j) {
      out << j << ',' << motions[static_cast<std::size_t>(j)].id << ','
          << detail::fmt_double(truth.mu(j)) << "\n";
    }
  }
  {
    auto out = detail::open_out(dir / "truth_alpha.csv");
    out << "index,dim,id,value\n";
    for (int j = 0; j < truth.m(); ++j) {
      for (int k = 0; k < truth.d; ++k) {
        out << j << ',' << k << ',' << motions[static_cast<std::size_t>(j)].id
            << ',' << detail::fmt_double(truth.alpha(j, k)) << "\n";
      }
    }
  }
  {
    auto out = detail::open_out(dir / "truth_beta.csv");
    out << "index,dim,id,value\n";
    for (int i = 0; i < truth.n(); ++i) {
      for (int k = 0; k < truth.d; ++k) {
        out << i << ',' << k << ',' << legislators[static_cast<std::size_t>(i)].id
            << ',' << detail::fmt_double(truth.beta(i, k)) << "\n";
      }
    }
  }
}

}  // namespace ideal
