#pragma once

// Shared test utilities: temp directories, a large engineered fixture with
// known filter counts, hand-built draw sets, and a sign-aligned correlation.

#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "ideal/data.hpp"
#include "ideal/sampler.hpp"

namespace testutil {

inline std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("ideal_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// 181 x 626 chamber fixture. Rows 150..180 miss 32 of 626 votes
// (participation 0.9489 < 0.95). Columns 560..625 are mixed before
// filtering but all-yea among the 150 surviving rows, so exactly 66
// motions drop as unanimous only after the legislators are removed.
inline ideal::RollCallMatrix large_chamber_fixture() {
  const int n = 181, m = 626, n_keep = 150, m_keep = 560;
  ideal::RollCallMatrix matrix;
  matrix.n = n;
  matrix.m = m;
  matrix.votes.resize(n, m);
  for (int i = 0; i < n; ++i) {
    ideal::LegislatorMeta leg;
    leg.id = "L" + std::to_string(1000 + i);
    leg.name = leg.id;
    leg.party = (i % 3 == 0) ? "blue" : "red";
    leg.group = (i % 2 == 0) ? "coalition" : "opposition";
    matrix.legislators.push_back(std::move(leg));
  }
  for (int j = 0; j < m; ++j) {
    ideal::MotionMeta mo;
    mo.id = "M" + std::to_string(1000 + j);
    matrix.motions.push_back(std::move(mo));
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      if (j >= m_keep) {
        // unanimous among survivors, mixed while the dropped rows are present
        matrix.votes(i, j) = (i < n_keep) ? 1 : 0;
      } else {
        matrix.votes(i, j) = static_cast<std::int8_t>((i + j) % 2);
      }
    }
  }
  // 32 missing votes per dropped row, spread across the regular columns
  for (int i = n_keep; i < n; ++i) {
    for (int k = 0; k < 32; ++k) {
      matrix.votes(i, (i * 17 + k * 13) % m_keep) = -1;
    }
  }
  return matrix;
}

inline double sign_aligned_correlation(const Eigen::VectorXd& a,
                                       const Eigen::VectorXd& b) {
  const Eigen::ArrayXd ca = a.array() - a.mean();
  const Eigen::ArrayXd cb = b.array() - b.mean();
  const double denom = std::sqrt(ca.square().sum() * cb.square().sum());
  if (denom == 0.0) return 0.0;
  return std::abs((ca * cb).sum() / denom);
}

// Hand-built single-block draw set for analytics tests: one chain per
// matrix, columns are beta parameters of n legislators (d = 1).
inline ideal::PosteriorDraws manual_beta_draws(
    const std::vector<Eigen::MatrixXd>& chains,
    const std::vector<std::string>& anchored_ids = {}) {
  ideal::PosteriorDraws draws;
  draws.n = static_cast<int>(chains.at(0).cols());
  draws.m = 1;
  draws.d = 1;
  draws.config.chains = static_cast<int>(chains.size());
  draws.config.iterations = chains[0].rows();
  draws.config.burn_in = 0;
  draws.config.thin = 1;
  for (int i = 0; i < draws.n; ++i) {
    ideal::LegislatorMeta leg;
    leg.id = "L" + std::to_string(100 + i);
    leg.name = leg.id;
    draws.legislators.push_back(std::move(leg));
  }
  ideal::MotionMeta mo;
  mo.id = "M100";
  draws.motions.push_back(mo);
  draws.motion_yea_share = Eigen::VectorXd::Constant(1, 0.5);
  for (const auto& id : anchored_ids) {
    ideal::Anchor a;
    a.legislator_id = id;
    a.position = Eigen::VectorXd::Zero(1);
    draws.anchors.anchors.push_back(std::move(a));
  }
  for (const auto& mat : chains) {
    ideal::ChainDraws cd;
    cd.beta = mat;
    cd.mu = Eigen::MatrixXd::Zero(mat.rows(), 1);
    cd.alpha = Eigen::MatrixXd::Zero(mat.rows(), 1);
    for (Eigen::Index r = 0; r < mat.rows(); ++r) cd.iteration.push_back(r + 1);
    draws.chains.push_back(std::move(cd));
  }
  return draws;
}

}  // namespace testutil
