#pragma once

// Anchor legislators: fixed ideal points that pin down the translation,
// rotation, and reflection freedom of the latent space.

#include <Eigen/Dense>
#include <string>
#include <unordered_set>
#include <vector>

#include "ideal/data.hpp"
#include "ideal/errors.hpp"

namespace ideal {

struct Anchor {
  std::string legislator_id;
  Eigen::VectorXd position;  // length d
};

struct AnchorSpec {
  std::vector<Anchor> anchors;

  int count() const { return static_cast<int>(anchors.size()); }
  const Anchor* find(const std::string& id) const {
    for (const auto& a : anchors) {
      if (a.legislator_id == id) return &a;
    }
    return nullptr;
  }
};

struct AnchorValidation {
  bool fully_identifying = false;  // count == d+1 and affinely independent
  std::vector<std::string> warnings;
};

// Checks existence, dimension, and affine independence of the anchor set.
// A count different from d+1 is a warning, not an error: the zero-mean,
// unit-covariance ideal-point priors already fix location and scale.
inline AnchorValidation validate_anchors(const RollCallMatrix& matrix,
                                         const AnchorSpec& anchors, int d) {
  if (d < 1) throw ValidationError("dimension d must be >= 1");
  AnchorValidation result;
  std::unordered_set<std::string> seen;
  for (const auto& a : anchors.anchors) {
    if (matrix.legislator_index(a.legislator_id) < 0) {
      throw ValidationError("anchor legislator id not in matrix: " + a.legislator_id);
    }
    if (!seen.insert(a.legislator_id).second) {
      throw ValidationError("duplicate anchor id: " + a.legislator_id);
    }
    if (a.position.size() != d) {
      throw ValidationError("anchor position for " + a.legislator_id +
                            " must have dimension d");
    }
    if (!a.position.allFinite()) {
      throw ValidationError("anchor position for " + a.legislator_id +
                            " must be finite");
    }
  }

  const int k = anchors.count();
  if (k >= 2) {
    // Affine independence: the k-1 offsets from the first anchor must have
    // full rank min(k-1, d); coincident points fail this immediately.
    Eigen::MatrixXd diffs(k - 1, d);
    for (int r = 1; r < k; ++r) {
      diffs.row(r - 1) =
          (anchors.anchors[static_cast<std::size_t>(r)].position -
           anchors.anchors[0].position)
              .transpose();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diffs);
    qr.setThreshold(1e-10);
    const int want = std::min(k - 1, d);
    if (qr.rank() < want) {
      throw ValidationError("anchor positions are not affinely independent");
    }
  }

  if (k != d + 1) {
    result.warnings.push_back(
        "anchor count " + std::to_string(k) + " != d+1 = " + std::to_string(d + 1) +
        "; rotation/reflection may remain unresolved (prior constraints still fix "
        "location and scale)");
  } else {
    result.fully_identifying = true;
  }
  return result;
}

}  // namespace ideal
