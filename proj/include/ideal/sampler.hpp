#pragma once

// Gibbs sampler with probit data augmentation.
//
// One sweep applies, in order:
//   (a) latent utilities  z_ij ~ TN(mu_j + alpha_j.beta_i, 1) on the side
//       fixed by the observed vote (Missing cells carry no latent value);
//   (b) per motion j, (mu_j, alpha_j) ~ N(c_j, C),
//       C = (A^-1 + E'E)^-1, c_j = C (A^-1 a + E' z_.j), E rows (1, beta_i)
//       restricted to the legislators observed on j;
//   (c) per non-anchored legislator i, beta_i ~ N(d_i, D_i),
//       D_i = (B_i^-1 + F'F)^-1, d_i = D_i (B_i^-1 b_i + F'(z_i. - mu)),
//       F rows alpha_j' restricted to the motions i voted on.
//
// Anchored legislators keep their fixed positions and are never sampled.
// The optional group-incentive extension widens step (b) to draw
// (mu_j, alpha_j, delta_j) with design rows (1, beta_i, D_i); step (c)
// then regresses z_ij - mu_j - delta_j D_i on alpha.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ideal/data.hpp"
#include "ideal/errors.hpp"
#include "ideal/identify.hpp"
#include "ideal/model.hpp"
#include "ideal/rng.hpp"

namespace ideal {

struct SamplerConfig {
  long iterations = 10000;
  long burn_in = 2000;
  long thin = 10;
  int chains = 2;
  std::uint64_t seed = 0;
  int d = 1;
  int threads = 1;

  long retained_per_chain() const {
    return (iterations > burn_in) ? (iterations - burn_in) / thin : 0;
  }

  void validate() const {
    if (iterations < 1) throw ValidationError("iterations must be >= 1");
    if (burn_in < 0) throw ValidationError("burn_in must be >= 0");
    if (thin < 1) throw ValidationError("thin must be >= 1");
    if (chains < 1) throw ValidationError("chains must be >= 1");
    if (d < 1) throw ValidationError("dimension d must be >= 1");
    if (threads < 1) throw ValidationError("threads must be >= 1");
    if (retained_per_chain() == 0) {
      throw ValidationError(
          "configuration retains zero draws per chain "
          "(iterations <= burn_in, or thin too large)");
    }
  }
};

// Which cells are observed, as index lists in both orientations.
struct ObservationPattern {
  int n = 0;
  int m = 0;
  std::vector<std::vector<int>> by_motion;      // rows observed on motion j
  std::vector<std::vector<int>> by_legislator;  // cols observed for row i
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> observed;
  std::vector<std::string> legislator_ids;

  static ObservationPattern build(const RollCallMatrix& matrix) {
    ObservationPattern p;
    p.n = matrix.n;
    p.m = matrix.m;
    p.by_motion.resize(static_cast<std::size_t>(matrix.m));
    p.by_legislator.resize(static_cast<std::size_t>(matrix.n));
    p.observed.setZero(matrix.n, matrix.m);
    p.legislator_ids.reserve(static_cast<std::size_t>(matrix.n));
    for (const auto& l : matrix.legislators) p.legislator_ids.push_back(l.id);
    for (int j = 0; j < matrix.m; ++j) {
      for (int i = 0; i < matrix.n; ++i) {
        if (matrix.observed(i, j)) {
          p.observed(i, j) = 1;
          p.by_motion[static_cast<std::size_t>(j)].push_back(i);
          p.by_legislator[static_cast<std::size_t>(i)].push_back(j);
        }
      }
    }
    return p;
  }
};

struct LatentGrid {
  std::shared_ptr<const ObservationPattern> pattern;
  Eigen::MatrixXd values;  // n x m; zero at unobserved cells

  bool has(int i, int j) const { return pattern->observed(i, j) != 0; }
};

struct ChainDraws {
  Eigen::MatrixXd mu;     // retained x m
  Eigen::MatrixXd alpha;  // retained x (m*d), column j*d+k
  Eigen::MatrixXd beta;   // retained x (n*d), column i*d+k
  Eigen::MatrixXd delta;  // retained x m when the group extension is active
  std::vector<long> iteration;  // absolute sweep index of each retained draw
};

enum class ParamBlock { mu, alpha, beta, delta };

struct PosteriorDraws {
  int n = 0;
  int m = 0;
  int d = 1;
  std::vector<ChainDraws> chains;
  SamplerConfig config;

  // provenance
  std::vector<LegislatorMeta> legislators;
  std::vector<MotionMeta> motions;
  AnchorSpec anchors;
  Eigen::VectorXd motion_yea_share;  // observed yea share per motion
  bool has_delta = false;
  Eigen::VectorXd group_indicator;   // n, only when has_delta
  double delta_prior_mean = 0.0;
  double delta_prior_variance = 25.0;
  std::uint64_t data_digest = 0;
  double wall_time_sec = 0.0;
  std::string acceptance_note = "gibbs sampler: all moves accepted";
  long jitter_events = 0;
  std::vector<std::string> warnings;

  long retained_per_chain() const {
    return chains.empty() ? 0 : static_cast<long>(chains[0].mu.rows());
  }
  long total_retained() const {
    return retained_per_chain() * static_cast<long>(chains.size());
  }

  bool is_anchored(int i) const {
    return anchors.find(legislators[static_cast<std::size_t>(i)].id) != nullptr;
  }
  int n_free() const {
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
      if (!is_anchored(i)) ++free_count;
    }
    return free_count;
  }
  long parameter_count() const {
    return static_cast<long>(n_free()) * d +
           static_cast<long>(m) * (d + 1 + (has_delta ? 1 : 0));
  }

  const Eigen::MatrixXd& block(int chain, ParamBlock b) const {
    const ChainDraws& c = chains[static_cast<std::size_t>(chain)];
    switch (b) {
      case ParamBlock::mu: return c.mu;
      case ParamBlock::alpha: return c.alpha;
      case ParamBlock::beta: return c.beta;
      default: return c.delta;
    }
  }
  Eigen::MatrixXd& block_mut(int chain, ParamBlock b) {
    ChainDraws& c = chains[static_cast<std::size_t>(chain)];
    switch (b) {
      case ParamBlock::mu: return c.mu;
      case ParamBlock::alpha: return c.alpha;
      case ParamBlock::beta: return c.beta;
      default: return c.delta;
    }
  }
  int block_cols(ParamBlock b) const {
    switch (b) {
      case ParamBlock::mu: return m;
      case ParamBlock::alpha: return m * d;
      case ParamBlock::beta: return n * d;
      default: return has_delta ? m : 0;
    }
  }

  // All chains stacked, one parameter column.
  Eigen::VectorXd pooled(ParamBlock b, int col) const {
    Eigen::VectorXd out(total_retained());
    long at = 0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const auto& mat = block(static_cast<int>(c), b);
      out.segment(at, mat.rows()) = mat.col(col);
      at += mat.rows();
    }
    return out;
  }
};

namespace detail {

inline std::uint64_t fnv1a_update(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t k = 0; k < len; ++k) {
    h ^= p[k];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t data_digest(const RollCallMatrix& matrix) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& l : matrix.legislators) {
    h = fnv1a_update(h, l.id.data(), l.id.size());
    h = fnv1a_update(h, "|", 1);
  }
  for (const auto& mo : matrix.motions) {
    h = fnv1a_update(h, mo.id.data(), mo.id.size());
    h = fnv1a_update(h, "|", 1);
  }
  for (int j = 0; j < matrix.m; ++j) {
    for (int i = 0; i < matrix.n; ++i) {
      const std::int8_t v = matrix.votes(i, j);
      h = fnv1a_update(h, &v, 1);
    }
  }
  return h;
}

// Draw from N(P^-1 r, P^-1) given the precision matrix P. P is SPD by
// construction here; the 1e-10 diagonal jitter is a guard and is counted
// so runs can report it.
inline Eigen::VectorXd draw_gaussian_from_precision(Eigen::MatrixXd& P,
                                                    const Eigen::VectorXd& r,
                                                    Rng& rng,
                                                    long* jitter_events) {
  Eigen::LLT<Eigen::MatrixXd> llt(P);
  if (llt.info() != Eigen::Success) {
    P.diagonal().array() += 1e-10;
    if (jitter_events != nullptr) ++(*jitter_events);
    llt.compute(P);
    if (llt.info() != Eigen::Success) {
      throw LinAlgError("conditional precision matrix is not positive definite");
    }
  }
  Eigen::VectorXd draw = llt.solve(r);
  Eigen::VectorXd xi(P.rows());
  for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = rng.normal();
  draw += llt.matrixU().solve(xi);
  return draw;
}

// Group-incentive payload; inactive for the base model.
struct GroupExtension {
  bool active = false;
  Eigen::VectorXd D;  // n entries in {0,1}
  double prior_mean = 0.0;
  double prior_variance = 25.0;
};

inline void draw_latents_inplace(const RollCallMatrix& matrix,
                                 const ObservationPattern& pattern,
                                 const Eigen::VectorXd& mu,
                                 const Eigen::MatrixXd& alpha,
                                 const Eigen::MatrixXd& beta,
                                 Eigen::MatrixXd& theta_buf,
                                 Eigen::MatrixXd& z, Rng& rng) {
  theta_buf.noalias() = beta * alpha.transpose();
  theta_buf.rowwise() += mu.transpose();
  for (int j = 0; j < pattern.m; ++j) {
    for (int i : pattern.by_motion[static_cast<std::size_t>(j)]) {
      const TruncationSide side = (matrix.vote(i, j) == Vote::Yea)
                                      ? TruncationSide::positive
                                      : TruncationSide::nonpositive;
      z(i, j) = sample_truncated_normal(theta_buf(i, j), side, rng);
    }
  }
}

}  // namespace detail

// Step (a) as a standalone operation: one latent grid from current params.
inline LatentGrid update_latents(const RollCallMatrix& matrix,
                                 const ModelParameters& params, Rng& rng) {
  params.validate_shapes(matrix);
  LatentGrid grid;
  grid.pattern = std::make_shared<ObservationPattern>(ObservationPattern::build(matrix));
  grid.values.setZero(matrix.n, matrix.m);
  Eigen::MatrixXd theta_buf(matrix.n, matrix.m);
  detail::draw_latents_inplace(matrix, *grid.pattern, params.mu, params.alpha,
                               params.beta, theta_buf, grid.values, rng);
  return grid;
}

// Step (b) as a standalone operation.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> update_item_parameters(
    const LatentGrid& z, const Eigen::MatrixXd& beta,
    const Hyperparameters& hyper, Rng& rng) {
  const ObservationPattern& pattern = *z.pattern;
  const int d = static_cast<int>(beta.cols());
  const int p = d + 1;
  hyper.validate(pattern.n, d);

  const Eigen::MatrixXd A_inv =
      hyper.A.llt().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd A_inv_a = A_inv * hyper.a;

  Eigen::VectorXd mu(pattern.m);
  Eigen::MatrixXd alpha(pattern.m, d);
  Eigen::MatrixXd P(p, p);
  Eigen::VectorXd r(p), u(p);
  for (int j = 0; j < pattern.m; ++j) {
    P = A_inv;
    r = A_inv_a;
    for (int i : pattern.by_motion[static_cast<std::size_t>(j)]) {
      u(0) = 1.0;
      u.segment(1, d) = beta.row(i).transpose();
      P.noalias() += u * u.transpose();
      r.noalias() += u * z.values(i, j);
    }
    const Eigen::VectorXd draw =
        detail::draw_gaussian_from_precision(P, r, rng, nullptr);
    mu(j) = draw(0);
    alpha.row(j) = draw.segment(1, d).transpose();
  }
  return {std::move(mu), std::move(alpha)};
}

// Step (c) as a standalone operation; anchored rows are assigned, not drawn.
inline Eigen::MatrixXd update_ideal_points(const LatentGrid& z,
                                           const Eigen::VectorXd& mu,
                                           const Eigen::MatrixXd& alpha,
                                           const Hyperparameters& hyper,
                                           const AnchorSpec& anchors,
                                           Rng& rng) {
  const ObservationPattern& pattern = *z.pattern;
  const int d = static_cast<int>(alpha.cols());
  hyper.validate(pattern.n, d);

  Eigen::MatrixXd beta(pattern.n, d);
  Eigen::MatrixXd P(d, d);
  Eigen::VectorXd r(d);
  for (int i = 0; i < pattern.n; ++i) {
    const Anchor* anchor =
        anchors.find(pattern.legislator_ids[static_cast<std::size_t>(i)]);
    if (anchor != nullptr) {
      if (anchor->position.size() != d) {
        throw ValidationError("anchor position dimension mismatch");
      }
      beta.row(i) = anchor->position.transpose();
      continue;
    }
    const Eigen::MatrixXd B_inv =
        hyper.B[static_cast<std::size_t>(i)].llt().solve(
            Eigen::MatrixXd::Identity(d, d));
    P = B_inv;
    r.noalias() = B_inv * hyper.b.row(i).transpose();
    for (int j : pattern.by_legislator[static_cast<std::size_t>(i)]) {
      P.noalias() += alpha.row(j).transpose() * alpha.row(j);
      r.noalias() += alpha.row(j).transpose() * (z.values(i, j) - mu(j));
    }
    beta.row(i) =
        detail::draw_gaussian_from_precision(P, r, rng, nullptr).transpose();
  }
  return beta;
}

namespace detail {

// Checks run_gibbs preconditions: the matrix must already be filtered.
inline void check_filtered(const RollCallMatrix& matrix) {
  for (int j = 0; j < matrix.m; ++j) {
    int yea = 0, nay = 0;
    for (int i = 0; i < matrix.n; ++i) {
      const Vote v = matrix.vote(i, j);
      if (v == Vote::Yea) ++yea;
      else if (v == Vote::Nay) ++nay;
    }
    if (yea == 0 || nay == 0) {
      throw ValidationError("motion " + matrix.motions[static_cast<std::size_t>(j)].id +
                            " is unanimous or unobserved; apply filter_matrix first");
    }
  }
  for (int i = 0; i < matrix.n; ++i) {
    bool any = false;
    for (int j = 0; j < matrix.m; ++j) {
      if (matrix.observed(i, j)) { any = true; break; }
    }
    if (!any) {
      throw ValidationError("legislator " + matrix.legislators[static_cast<std::size_t>(i)].id +
                            " has no observed votes; apply filter_matrix first");
    }
  }
}

struct ChainWorkspace {
  Eigen::MatrixXd theta;  // n x m linear predictors
  Eigen::MatrixXd z;      // latent grid
  Eigen::VectorXd mu;
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd beta;
  Eigen::VectorXd delta;
};

inline void run_single_chain(const RollCallMatrix& matrix,
                             const ObservationPattern& pattern,
                             const Hyperparameters& hyper,
                             const AnchorSpec& anchors,
                             const SamplerConfig& config,
                             const GroupExtension& ext, int chain_index,
                             ChainDraws& out, std::atomic<long>& jitter_events) {
  const int n = matrix.n, m = matrix.m, d = config.d;
  const int p = d + 1 + (ext.active ? 1 : 0);
  Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(chain_index));

  // Resolve anchors to row indices once.
  std::vector<int> anchor_row(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    anchor_row[static_cast<std::size_t>(i)] =
        anchors.find(matrix.legislators[static_cast<std::size_t>(i)].id) ? 1 : 0;
  }

  // Prior pieces. The extended item prior is block-diagonal: A for
  // (mu, alpha), an independent normal for delta.
  Eigen::MatrixXd A_inv_full = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd A_inv_a_full = Eigen::VectorXd::Zero(p);
  {
    const Eigen::MatrixXd A_inv =
        hyper.A.llt().solve(Eigen::MatrixXd::Identity(d + 1, d + 1));
    A_inv_full.topLeftCorner(d + 1, d + 1) = A_inv;
    A_inv_a_full.head(d + 1) = A_inv * hyper.a;
    if (ext.active) {
      A_inv_full(d + 1, d + 1) = 1.0 / ext.prior_variance;
      A_inv_a_full(d + 1) = ext.prior_mean / ext.prior_variance;
    }
  }
  std::vector<Eigen::MatrixXd> B_inv(static_cast<std::size_t>(n));
  std::vector<Eigen::VectorXd> B_inv_b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    B_inv[static_cast<std::size_t>(i)] =
        hyper.B[static_cast<std::size_t>(i)].llt().solve(
            Eigen::MatrixXd::Identity(d, d));
    B_inv_b[static_cast<std::size_t>(i)] =
        B_inv[static_cast<std::size_t>(i)] * hyper.b.row(i).transpose();
  }

  ChainWorkspace w;
  w.theta.resize(n, m);
  w.z.setZero(n, m);
  w.mu.setZero(m);
  w.alpha.setZero(m, d);
  w.beta.setZero(n, d);
  w.delta.setZero(ext.active ? m : 0);

  // Starting configuration: anchors at their fixed positions, free ideal
  // points at small seeded noise around the prior mean, items at zero.
  for (int i = 0; i < n; ++i) {
    if (anchor_row[static_cast<std::size_t>(i)]) {
      w.beta.row(i) =
          anchors.find(matrix.legislators[static_cast<std::size_t>(i)].id)
              ->position.transpose();
    } else {
      for (int k = 0; k < d; ++k) w.beta(i, k) = 0.1 * rng.normal();
    }
  }

  const long retained = config.retained_per_chain();
  out.mu.resize(retained, m);
  out.alpha.resize(retained, m * d);
  out.beta.resize(retained, n * d);
  if (ext.active) out.delta.resize(retained, m);
  out.iteration.clear();
  out.iteration.reserve(static_cast<std::size_t>(retained));

  long local_jitter = 0;
  Eigen::MatrixXd P(p, p);
  Eigen::VectorXd r(p), u(p);
  Eigen::MatrixXd Pb(d, d);
  Eigen::VectorXd rb(d);

  long stored = 0;
  for (long t = 1; t <= config.iterations; ++t) {
    // (a) latent utilities
    w.theta.noalias() = w.beta * w.alpha.transpose();
    w.theta.rowwise() += w.mu.transpose();
    if (ext.active) w.theta.noalias() += ext.D * w.delta.transpose();
    for (int j = 0; j < m; ++j) {
      for (int i : pattern.by_motion[static_cast<std::size_t>(j)]) {
        const TruncationSide side = (matrix.vote(i, j) == Vote::Yea)
                                        ? TruncationSide::positive
                                        : TruncationSide::nonpositive;
        w.z(i, j) = sample_truncated_normal(w.theta(i, j), side, rng);
      }
    }

    // (b) item parameters, motion by motion
    for (int j = 0; j < m; ++j) {
      P = A_inv_full;
      r = A_inv_a_full;
      for (int i : pattern.by_motion[static_cast<std::size_t>(j)]) {
        u(0) = 1.0;
        u.segment(1, d) = w.beta.row(i).transpose();
        if (ext.active) u(d + 1) = ext.D(i);
        P.noalias() += u * u.transpose();
        r.noalias() += u * w.z(i, j);
      }
      const Eigen::VectorXd draw =
          draw_gaussian_from_precision(P, r, rng, &local_jitter);
      w.mu(j) = draw(0);
      w.alpha.row(j) = draw.segment(1, d).transpose();
      if (ext.active) w.delta(j) = draw(d + 1);
    }

    // (c) ideal points, legislator by legislator (anchors stay fixed)
    for (int i = 0; i < n; ++i) {
      if (anchor_row[static_cast<std::size_t>(i)]) continue;
      Pb = B_inv[static_cast<std::size_t>(i)];
      rb = B_inv_b[static_cast<std::size_t>(i)];
      for (int j : pattern.by_legislator[static_cast<std::size_t>(i)]) {
        double resid = w.z(i, j) - w.mu(j);
        if (ext.active) resid -= w.delta(j) * ext.D(i);
        Pb.noalias() += w.alpha.row(j).transpose() * w.alpha.row(j);
        rb.noalias() += w.alpha.row(j).transpose() * resid;
      }
      w.beta.row(i) =
          draw_gaussian_from_precision(Pb, rb, rng, &local_jitter).transpose();
    }

    if (t > config.burn_in && (t - config.burn_in) % config.thin == 0) {
      out.mu.row(stored) = w.mu.transpose();
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < d; ++k) out.alpha(stored, j * d + k) = w.alpha(j, k);
      }
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) out.beta(stored, i * d + k) = w.beta(i, k);
      }
      if (ext.active) out.delta.row(stored) = w.delta.transpose();
      out.iteration.push_back(t);
      ++stored;
    }
  }
  jitter_events.fetch_add(local_jitter, std::memory_order_relaxed);
}

inline PosteriorDraws run_gibbs_core(const RollCallMatrix& matrix,
                                     const Hyperparameters& hyper,
                                     const AnchorSpec& anchors,
                                     const SamplerConfig& config,
                                     const GroupExtension& ext) {
  const auto t0 = std::chrono::steady_clock::now();
  matrix.validate();
  config.validate();
  hyper.validate(matrix.n, config.d);
  check_filtered(matrix);
  const AnchorValidation anchor_report = validate_anchors(matrix, anchors, config.d);
  if (ext.active) {
    if (static_cast<int>(ext.D.size()) != matrix.n) {
      throw ValidationError("group indicator length must equal n");
    }
    bool any0 = false, any1 = false;
    for (int i = 0; i < matrix.n; ++i) {
      if (ext.D(i) == 0.0) any0 = true;
      else if (ext.D(i) == 1.0) any1 = true;
      else throw ValidationError("group indicator entries must be 0 or 1");
    }
    if (!any0 || !any1) {
      throw ValidationError("group indicator is constant; delta_j is unidentified");
    }
    if (!(ext.prior_variance > 0.0)) {
      throw ValidationError("delta prior variance must be positive");
    }
  }

  PosteriorDraws draws;
  draws.n = matrix.n;
  draws.m = matrix.m;
  draws.d = config.d;
  draws.config = config;
  draws.legislators = matrix.legislators;
  draws.motions = matrix.motions;
  draws.anchors = anchors;
  draws.has_delta = ext.active;
  if (ext.active) {
    draws.group_indicator = ext.D;
    draws.delta_prior_mean = ext.prior_mean;
    draws.delta_prior_variance = ext.prior_variance;
  }
  draws.data_digest = data_digest(matrix);
  draws.warnings = anchor_report.warnings;
  if (config.retained_per_chain() < 100) {
    draws.warnings.push_back(
        "fewer than 100 retained draws per chain; posterior summaries will be noisy");
  }

  draws.motion_yea_share.resize(matrix.m);
  for (int j = 0; j < matrix.m; ++j) {
    int yea = 0, obs = 0;
    for (int i = 0; i < matrix.n; ++i) {
      const Vote v = matrix.vote(i, j);
      if (v == Vote::Missing) continue;
      ++obs;
      if (v == Vote::Yea) ++yea;
    }
    draws.motion_yea_share(j) =
        obs > 0 ? static_cast<double>(yea) / static_cast<double>(obs) : 0.0;
  }

  const ObservationPattern pattern = ObservationPattern::build(matrix);
  draws.chains.resize(static_cast<std::size_t>(config.chains));
  std::atomic<long> jitter_events{0};

  const int workers = std::min(config.threads, config.chains);
  if (workers <= 1) {
    for (int c = 0; c < config.chains; ++c) {
      run_single_chain(matrix, pattern, hyper, anchors, config, ext, c,
                       draws.chains[static_cast<std::size_t>(c)], jitter_events);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int wix = 0; wix < workers; ++wix) {
      pool.emplace_back([&]() {
        for (;;) {
          const int c = next.fetch_add(1);
          if (c >= config.chains) return;
          run_single_chain(matrix, pattern, hyper, anchors, config, ext, c,
                           draws.chains[static_cast<std::size_t>(c)],
                           jitter_events);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  draws.jitter_events = jitter_events.load();
  if (draws.jitter_events > 0) {
    draws.warnings.push_back("diagonal jitter applied " +
                             std::to_string(draws.jitter_events) +
                             " times during factorization");
  }
  draws.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return draws;
}

}  // namespace detail

inline PosteriorDraws run_gibbs(const RollCallMatrix& matrix,
                                const Hyperparameters& hyper,
                                const AnchorSpec& anchors,
                                const SamplerConfig& config) {
  return detail::run_gibbs_core(matrix, hyper, anchors, config,
                                detail::GroupExtension{});
}

}  // namespace ideal
