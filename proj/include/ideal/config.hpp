#pragma once

// Run configuration: a flat `key = value` text file (# starts a comment).
// Every field has a default except the data path and the anchors. Command
// line flags override file values.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ideal/errors.hpp"
#include "ideal/identify.hpp"
#include "ideal/load.hpp"
#include "ideal/sampler.hpp"

namespace ideal {

struct RunConfig {
  // data
  std::string data_path;
  DataFormat format = DataFormat::csv;
  double min_participation = 0.0;
  bool drop_unanimous = true;

  // model / priors
  int d = 1;
  double sigma2 = 25.0;
  std::vector<std::pair<std::string, std::vector<double>>> anchors;

  // sampler
  long iterations = 10000;
  long burn_in = 2000;
  long thin = 10;
  int chains = 2;
  std::uint64_t seed = 0;
  int threads = 1;

  // analysis
  double ci_level = 0.95;
  std::vector<int> ranks;
  std::vector<std::string> ppc_statistics;
  long ppc_replicates = 500;
  std::string orient_reference;
  std::vector<int> orient_sign;

  // group-incentive extension
  bool party = false;
  std::string party_group_label;  // D_i = 1 when group metadata equals this
  std::string group_file;         // or an explicit id,indicator mapping file
  double delta_prior_mean = 0.0;
  double delta_prior_variance = 25.0;

  // output
  std::string out_dir = "ideal_run";
  bool quiet = false;

  SamplerConfig sampler_config() const {
    SamplerConfig cfg;
    cfg.iterations = iterations;
    cfg.burn_in = burn_in;
    cfg.thin = thin;
    cfg.chains = chains;
    cfg.seed = seed;
    cfg.d = d;
    cfg.threads = threads;
    return cfg;
  }

  AnchorSpec anchor_spec() const {
    AnchorSpec spec;
    for (const auto& [id, coords] : anchors) {
      Anchor a;
      a.legislator_id = id;
      a.position.resize(static_cast<Eigen::Index>(coords.size()));
      for (std::size_t k = 0; k < coords.size(); ++k) {
        a.position(static_cast<Eigen::Index>(k)) = coords[k];
      }
      spec.anchors.push_back(std::move(a));
    }
    return spec;
  }
};

namespace detail {

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config: " + key + " must be a boolean, got '" + v + "'");
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, sep)) {
    piece = strip(piece);
    if (!piece.empty()) parts.push_back(piece);
  }
  return parts;
}

}  // namespace detail

// `anchors = L1:-1, L2:1` ; multi-d positions use '|': `L1:0.5|0.2`.
inline std::vector<std::pair<std::string, std::vector<double>>> parse_anchor_list(
    const std::string& value) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (const auto& entry : detail::split_on(value, ',')) {
    const auto colon = entry.rfind(':');
    if (colon == std::string::npos) {
      throw ValidationError("config: anchor entry needs id:position, got '" + entry + "'");
    }
    const std::string id = detail::strip(entry.substr(0, colon));
    std::vector<double> coords;
    for (const auto& c : detail::split_on(entry.substr(colon + 1), '|')) {
      try {
        coords.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw ValidationError("config: bad anchor coordinate '" + c + "'");
      }
    }
    if (id.empty() || coords.empty()) {
      throw ValidationError("config: bad anchor entry '" + entry + "'");
    }
    out.emplace_back(id, std::move(coords));
  }
  return out;
}

inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
  try {
    if (key == "data") cfg.data_path = value;
    else if (key == "format") {
      if (value == "csv") cfg.format = DataFormat::csv;
      else if (value == "json") cfg.format = DataFormat::json;
      else throw ValidationError("config: format must be csv or json");
    } else if (key == "min_participation") cfg.min_participation = std::stod(value);
    else if (key == "drop_unanimous") cfg.drop_unanimous = detail::parse_bool(value, key);
    else if (key == "d") cfg.d = std::stoi(value);
    else if (key == "sigma2") cfg.sigma2 = std::stod(value);
    else if (key == "anchors") cfg.anchors = parse_anchor_list(value);
    else if (key == "iterations") cfg.iterations = std::stol(value);
    else if (key == "burn_in") cfg.burn_in = std::stol(value);
    else if (key == "thin") cfg.thin = std::stol(value);
    else if (key == "chains") cfg.chains = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "threads") cfg.threads = std::stoi(value);
    else if (key == "ci_level") cfg.ci_level = std::stod(value);
    else if (key == "ranks") {
      cfg.ranks.clear();
      for (const auto& r : detail::split_on(value, ',')) cfg.ranks.push_back(std::stoi(r));
    } else if (key == "ppc_statistics") cfg.ppc_statistics = detail::split_on(value, ',');
    else if (key == "ppc_replicates") cfg.ppc_replicates = std::stol(value);
    else if (key == "orient_reference") cfg.orient_reference = value;
    else if (key == "orient_sign") {
      cfg.orient_sign.clear();
      for (const auto& s : detail::split_on(value, ',')) cfg.orient_sign.push_back(std::stoi(s));
    } else if (key == "party") cfg.party = detail::parse_bool(value, key);
    else if (key == "party_group") cfg.party_group_label = value;
    else if (key == "group_file") cfg.group_file = value;
    else if (key == "delta_prior_mean") cfg.delta_prior_mean = std::stod(value);
    else if (key == "delta_prior_variance") cfg.delta_prior_variance = std::stod(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "quiet") cfg.quiet = detail::parse_bool(value, key);
    else throw ValidationError("config: unknown key '" + key + "'");
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("config: bad value for '" + key + "': '" + value + "'");
  }
}

inline RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config lines must be 'key = value'", lineno, 1);
    }
    apply_config_entry(cfg, detail::strip(line.substr(0, eq)),
                       detail::strip(line.substr(eq + 1)));
  }
  return cfg;
}

// Resolves the binary group indicator from metadata or a mapping file.
inline Eigen::VectorXd resolve_group_indicator(const RunConfig& cfg,
                                               const RollCallMatrix& matrix) {
  Eigen::VectorXd D(matrix.n);
  if (!cfg.group_file.empty()) {
    std::ifstream in(cfg.group_file);
    if (!in) throw ValidationError("cannot open group file: " + cfg.group_file);
    std::map<std::string, double> mapping;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = detail::strip(line);
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw ParseError("group file lines must be 'id,indicator'", lineno, 1);
      }
      const std::string id = detail::strip(line.substr(0, comma));
      const std::string v = detail::strip(line.substr(comma + 1));
      if (id == "id" || id == "legislator_id") continue;  // optional header
      if (v != "0" && v != "1") {
        throw ParseError("group indicator must be 0 or 1", lineno, static_cast<long>(comma + 2));
      }
      mapping[id] = (v == "1") ? 1.0 : 0.0;
    }
    for (int i = 0; i < matrix.n; ++i) {
      const auto it = mapping.find(matrix.legislators[static_cast<std::size_t>(i)].id);
      if (it == mapping.end()) {
        throw ValidationError("group file missing legislator " +
                              matrix.legislators[static_cast<std::size_t>(i)].id);
      }
      D(i) = it->second;
    }
    return D;
  }
  if (cfg.party_group_label.empty()) {
    throw ValidationError(
        "party extension needs party_group = <group label> or group_file = <path>");
  }
  for (int i = 0; i < matrix.n; ++i) {
    D(i) = (matrix.legislators[static_cast<std::size_t>(i)].group ==
            cfg.party_group_label)
               ? 1.0
               : 0.0;
  }
  return D;
}

}  // namespace ideal
