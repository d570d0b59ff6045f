#pragma once

// Roll-call matrix types, validation, and the participation/unanimity filter.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ideal/errors.hpp"

namespace ideal {

enum class Vote : std::int8_t { Nay = 0, Yea = 1, Missing = -1 };

struct LegislatorMeta {
  std::string id;
  std::string name;
  std::string party;
  std::string group;
};

struct MotionMeta {
  std::string id;
  std::string label;
  std::string topic;
  std::optional<int> sponsor_flag;
};

using VoteGrid = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct RollCallMatrix {
  int n = 0;
  int m = 0;
  VoteGrid votes;  // n x m, entries are the Vote codes
  std::vector<LegislatorMeta> legislators;
  std::vector<MotionMeta> motions;

  Vote vote(int i, int j) const { return static_cast<Vote>(votes(i, j)); }
  bool observed(int i, int j) const {
    return votes(i, j) != static_cast<std::int8_t>(Vote::Missing);
  }

  int legislator_index(const std::string& id) const {
    for (int i = 0; i < n; ++i) {
      if (legislators[static_cast<std::size_t>(i)].id == id) return i;
    }
    return -1;
  }

  void validate() const {
    if (n < 2) throw ValidationError("roll-call matrix needs n >= 2 legislators");
    if (m < 1) throw ValidationError("roll-call matrix needs m >= 1 motions");
    if (votes.rows() != n || votes.cols() != m) {
      throw ValidationError("vote grid shape does not match n x m");
    }
    if (static_cast<int>(legislators.size()) != n) {
      throw ValidationError("legislator metadata length != n");
    }
    if (static_cast<int>(motions.size()) != m) {
      throw ValidationError("motion metadata length != m");
    }
    auto check_id = [](const std::string& id, const char* what) {
      if (id.empty()) throw ValidationError(std::string("empty ") + what + " id");
      if (id.find_first_of(",\n\r") != std::string::npos) {
        throw ValidationError(std::string(what) + " id contains a comma or newline: " + id);
      }
    };
    std::unordered_set<std::string> seen;
    for (const auto& l : legislators) {
      check_id(l.id, "legislator");
      if (!seen.insert(l.id).second) {
        throw ValidationError("duplicate legislator id: " + l.id);
      }
    }
    seen.clear();
    for (const auto& mo : motions) {
      check_id(mo.id, "motion");
      if (!seen.insert(mo.id).second) {
        throw ValidationError("duplicate motion id: " + mo.id);
      }
    }
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) {
        const auto v = votes(i, j);
        if (v != 0 && v != 1 && v != -1) {
          throw ValidationError("vote grid holds a value outside {Yea,Nay,Missing}");
        }
      }
    }
  }
};

enum class MotionDropReason { unanimous, all_missing };

struct FilterReport {
  std::vector<std::pair<std::string, double>> dropped_legislators;  // id, participation
  std::vector<std::pair<std::string, MotionDropReason>> dropped_motions;
  int n_before = 0;
  int n_after = 0;
  int m_before = 0;
  int m_after = 0;

  bool empty() const {
    return dropped_legislators.empty() && dropped_motions.empty();
  }
};

// Drops legislators below the participation threshold, then motions that are
// unanimous among the remaining legislators (or carry no observed vote at
// all). One pass, in that order; a motion that becomes unanimous only after
// the legislator removals is dropped in the same call.
inline std::pair<RollCallMatrix, FilterReport> filter_matrix(
    const RollCallMatrix& matrix, double min_participation,
    bool drop_unanimous) {
  matrix.validate();
  if (!(min_participation >= 0.0 && min_participation <= 1.0)) {
    throw DomainError("min_participation must lie in [0,1]");
  }

  FilterReport report;
  report.n_before = matrix.n;
  report.m_before = matrix.m;

  std::vector<int> keep_rows;
  keep_rows.reserve(static_cast<std::size_t>(matrix.n));
  for (int i = 0; i < matrix.n; ++i) {
    int observed = 0;
    for (int j = 0; j < matrix.m; ++j) {
      if (matrix.observed(i, j)) ++observed;
    }
    const double participation =
        static_cast<double>(observed) / static_cast<double>(matrix.m);
    if (participation < min_participation) {
      report.dropped_legislators.emplace_back(
          matrix.legislators[static_cast<std::size_t>(i)].id, participation);
    } else {
      keep_rows.push_back(i);
    }
  }

  std::vector<int> keep_cols;
  keep_cols.reserve(static_cast<std::size_t>(matrix.m));
  for (int j = 0; j < matrix.m; ++j) {
    int yea = 0, nay = 0;
    for (int i : keep_rows) {
      const Vote v = matrix.vote(i, j);
      if (v == Vote::Yea) ++yea;
      else if (v == Vote::Nay) ++nay;
    }
    const std::string& id = matrix.motions[static_cast<std::size_t>(j)].id;
    if (yea + nay == 0) {
      report.dropped_motions.emplace_back(id, MotionDropReason::all_missing);
    } else if (drop_unanimous && (yea == 0 || nay == 0)) {
      report.dropped_motions.emplace_back(id, MotionDropReason::unanimous);
    } else {
      keep_cols.push_back(j);
    }
  }

  report.n_after = static_cast<int>(keep_rows.size());
  report.m_after = static_cast<int>(keep_cols.size());
  if (report.n_after < 2 || report.m_after < 1) {
    throw ValidationError(
        "filtering left a degenerate matrix (n_after=" +
        std::to_string(report.n_after) +
        ", m_after=" + std::to_string(report.m_after) + ")");
  }

  RollCallMatrix out;
  out.n = report.n_after;
  out.m = report.m_after;
  out.votes.resize(out.n, out.m);
  out.legislators.reserve(keep_rows.size());
  out.motions.reserve(keep_cols.size());
  for (int i : keep_rows) {
    out.legislators.push_back(matrix.legislators[static_cast<std::size_t>(i)]);
  }
  for (int j : keep_cols) {
    out.motions.push_back(matrix.motions[static_cast<std::size_t>(j)]);
  }
  for (int jj = 0; jj < out.m; ++jj) {
    for (int ii = 0; ii < out.n; ++ii) {
      out.votes(ii, jj) = matrix.votes(keep_rows[static_cast<std::size_t>(ii)],
                                       keep_cols[static_cast<std::size_t>(jj)]);
    }
  }
  return {std::move(out), std::move(report)};
}

}  // namespace ideal
