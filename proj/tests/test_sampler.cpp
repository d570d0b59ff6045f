#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "grid_oracle.hpp"
#include "helpers.hpp"
#include "ideal/model.hpp"
#include "ideal/sampler.hpp"
#include "ideal/synth.hpp"

using namespace ideal;

namespace {

RollCallMatrix votes_matrix(int n, int m, const std::vector<int>& cells) {
  RollCallMatrix matrix;
  matrix.n = n;
  matrix.m = m;
  matrix.votes.resize(n, m);
  for (int i = 0; i < n; ++i) {
    LegislatorMeta leg;
    leg.id = "L" + std::to_string(i);
    leg.name = leg.id;
    matrix.legislators.push_back(std::move(leg));
  }
  for (int j = 0; j < m; ++j) {
    MotionMeta mo;
    mo.id = "M" + std::to_string(j);
    matrix.motions.push_back(std::move(mo));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      matrix.votes(i, j) = static_cast<std::int8_t>(cells[static_cast<std::size_t>(i * m + j)]);
    }
  }
  return matrix;
}

AnchorSpec one_anchor(const std::string& id, double pos) {
  AnchorSpec spec;
  Anchor a;
  a.legislator_id = id;
  a.position = Eigen::VectorXd::Constant(1, pos);
  spec.anchors.push_back(std::move(a));
  return spec;
}

AnchorSpec two_anchors(const std::string& id1, double p1, const std::string& id2,
                       double p2) {
  AnchorSpec spec = one_anchor(id1, p1);
  Anchor b;
  b.legislator_id = id2;
  b.position = Eigen::VectorXd::Constant(1, p2);
  spec.anchors.push_back(std::move(b));
  return spec;
}

bool draws_equal(const PosteriorDraws& a, const PosteriorDraws& b) {
  if (a.chains.size() != b.chains.size()) return false;
  for (std::size_t c = 0; c < a.chains.size(); ++c) {
    if (a.chains[c].mu != b.chains[c].mu) return false;
    if (a.chains[c].alpha != b.chains[c].alpha) return false;
    if (a.chains[c].beta != b.chains[c].beta) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("latent draws respect the sign dictated by each vote") {
  const RollCallMatrix matrix = votes_matrix(3, 3, {1, 0, 1, 0, 1, -1, 1, 0, 0});
  ModelParameters p;
  p.d = 1;
  p.mu = Eigen::VectorXd::Zero(3);
  p.alpha = Eigen::MatrixXd::Ones(3, 1);
  p.beta = Eigen::MatrixXd::Zero(3, 1);
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const LatentGrid z = update_latents(matrix, p, rng);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (matrix.vote(i, j) == Vote::Missing) {
          CHECK_FALSE(z.has(i, j));
          CHECK(z.values(i, j) == 0.0);
        } else if (matrix.vote(i, j) == Vote::Yea) {
          CHECK(z.values(i, j) > 0.0);
        } else {
          CHECK(z.values(i, j) <= 0.0);
        }
      }
    }
  }
}

TEST_CASE("an all-missing row carries no latent values") {
  RollCallMatrix matrix = votes_matrix(3, 2, {1, 0, -1, -1, 0, 1});
  ModelParameters p;
  p.d = 1;
  p.mu = Eigen::VectorXd::Zero(2);
  p.alpha = Eigen::MatrixXd::Ones(2, 1);
  p.beta = Eigen::MatrixXd::Zero(3, 1);
  Rng rng(2);
  const LatentGrid z = update_latents(matrix, p, rng);
  CHECK_FALSE(z.has(1, 0));
  CHECK_FALSE(z.has(1, 1));
  CHECK(z.values.row(1).isZero());
}

TEST_CASE("item update matches the dense ridge formula") {
  // d=1, n=2, beta=(1,-1), fixed latent column; empirical mean of many
  // draws must match (A^-1 + E'E)^-1 (A^-1 a + E'z) from a dense solve.
  const RollCallMatrix matrix = votes_matrix(2, 1, {1, 0});
  Hyperparameters hyper = default_hyperparameters(2, 1, 25.0);
  Eigen::MatrixXd beta(2, 1);
  beta << 1.0, -1.0;

  LatentGrid z;
  z.pattern = std::make_shared<ObservationPattern>(ObservationPattern::build(matrix));
  z.values.resize(2, 1);
  z.values << 0.9, -0.4;

  Eigen::MatrixXd E(2, 2);
  E << 1.0, 1.0, 1.0, -1.0;
  Eigen::VectorXd zcol(2);
  zcol << 0.9, -0.4;
  const Eigen::MatrixXd A_inv = hyper.A.inverse();
  const Eigen::MatrixXd C = (A_inv + E.transpose() * E).inverse();
  const Eigen::VectorXd expected = C * (A_inv * hyper.a + E.transpose() * zcol);

  Rng rng(3);
  const int reps = 40000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int r = 0; r < reps; ++r) {
    auto [mu, alpha] = update_item_parameters(z, beta, hyper, rng);
    sum(0) += mu(0);
    sum(1) += alpha(0, 0);
  }
  const Eigen::Vector2d mean = sum / reps;
  const double se0 = std::sqrt(C(0, 0) / reps);
  const double se1 = std::sqrt(C(1, 1) / reps);
  CHECK_THAT(mean(0), Catch::Matchers::WithinAbs(expected(0), 5.0 * se0));
  CHECK_THAT(mean(1), Catch::Matchers::WithinAbs(expected(1), 5.0 * se1));
}

TEST_CASE("item update approaches ordinary least squares under a vague prior") {
  const RollCallMatrix matrix = votes_matrix(4, 1, {1, 0, 1, 0});
  Hyperparameters hyper = default_hyperparameters(4, 1, 1e10);
  Eigen::MatrixXd beta(4, 1);
  beta << 1.3, -0.2, 0.4, -1.1;

  LatentGrid z;
  z.pattern = std::make_shared<ObservationPattern>(ObservationPattern::build(matrix));
  z.values.resize(4, 1);
  z.values << 1.2, -0.3, 0.8, -0.9;

  Eigen::MatrixXd E(4, 2);
  for (int i = 0; i < 4; ++i) {
    E(i, 0) = 1.0;
    E(i, 1) = beta(i, 0);
  }
  const Eigen::VectorXd ols =
      (E.transpose() * E).ldlt().solve(E.transpose() * z.values.col(0));

  Rng rng(4);
  const int reps = 40000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int r = 0; r < reps; ++r) {
    auto [mu, alpha] = update_item_parameters(z, beta, hyper, rng);
    sum(0) += mu(0);
    sum(1) += alpha(0, 0);
  }
  const Eigen::Vector2d mean = sum / reps;
  CHECK_THAT(mean(0), Catch::Matchers::WithinAbs(ols(0), 0.02));
  CHECK_THAT(mean(1), Catch::Matchers::WithinAbs(ols(1), 0.02));
}

TEST_CASE("ideal-point update matches the hand-evaluated conjugate mean") {
  // d=1, m=2, alpha=(1,1), mu=(0,0), z_i. = (0.5, 1.5), B=1, b=0:
  // posterior mean (0 + 2.0) / (1 + 2) = 2/3, variance 1/3.
  const RollCallMatrix matrix = votes_matrix(2, 2, {1, 1, 0, 0});
  Hyperparameters hyper = default_hyperparameters(2, 1, 25.0);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Ones(2, 1);

  LatentGrid z;
  z.pattern = std::make_shared<ObservationPattern>(ObservationPattern::build(matrix));
  z.values.resize(2, 2);
  z.values << 0.5, 1.5, -0.5, -0.5;

  AnchorSpec none;
  Rng rng(5);
  const int reps = 40000;
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::MatrixXd beta = update_ideal_points(z, mu, alpha, hyper, none, rng);
    sum += beta(0, 0);
  }
  const double se = std::sqrt((1.0 / 3.0) / reps);
  CHECK_THAT(sum / reps, Catch::Matchers::WithinAbs(2.0 / 3.0, 5.0 * se));
}

TEST_CASE("anchored rows are assigned exactly, never sampled") {
  const RollCallMatrix matrix = votes_matrix(3, 2, {1, 0, 0, 1, 1, 0});
  Hyperparameters hyper = default_hyperparameters(3, 1);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Ones(2, 1);
  LatentGrid z;
  z.pattern = std::make_shared<ObservationPattern>(ObservationPattern::build(matrix));
  z.values.setZero(3, 2);
  const AnchorSpec anchors = one_anchor("L1", -1.25);
  Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd beta = update_ideal_points(z, mu, alpha, hyper, anchors, rng);
    REQUIRE(beta(1, 0) == -1.25);
  }
}

TEST_CASE("run_gibbs validates its preconditions before sampling") {
  const RollCallMatrix matrix = votes_matrix(3, 2, {1, 0, 0, 1, 1, 0});
  const Hyperparameters hyper = default_hyperparameters(3, 1);
  const AnchorSpec anchors = two_anchors("L0", -1.0, "L1", 1.0);

  SamplerConfig zero_retained;
  zero_retained.iterations = 100;
  zero_retained.burn_in = 100;
  CHECK_THROWS_AS(run_gibbs(matrix, hyper, anchors, zero_retained), ValidationError);

  SamplerConfig ok;
  ok.iterations = 30;
  ok.burn_in = 10;
  ok.thin = 1;
  ok.chains = 1;
  const RollCallMatrix unanimous = votes_matrix(3, 2, {1, 1, 0, 1, 1, 1});
  CHECK_THROWS_AS(run_gibbs(unanimous, hyper, anchors, ok), ValidationError);

  const RollCallMatrix empty_row = votes_matrix(3, 2, {1, 0, -1, -1, 0, 1});
  CHECK_THROWS_AS(run_gibbs(empty_row, hyper, anchors, ok), ValidationError);

  CHECK_THROWS_AS(run_gibbs(matrix, hyper, one_anchor("nope", 0.0), ok),
                  ValidationError);
}

TEST_CASE("run_gibbs is bit-reproducible and thread-count invariant") {
  const SynthResult sim = simulate({.n = 12, .m = 18, .d = 1, .seed = 77});
  const Hyperparameters hyper = default_hyperparameters(12, 1);
  const AnchorSpec anchors = two_anchors("L0000", -1.0, "L0001", 1.0);
  SamplerConfig config;
  config.iterations = 400;
  config.burn_in = 100;
  config.thin = 2;
  config.chains = 2;
  config.seed = 99;

  const PosteriorDraws a = run_gibbs(sim.matrix, hyper, anchors, config);
  const PosteriorDraws b = run_gibbs(sim.matrix, hyper, anchors, config);
  CHECK(draws_equal(a, b));

  SamplerConfig parallel = config;
  parallel.threads = 2;
  const PosteriorDraws c = run_gibbs(sim.matrix, hyper, anchors, parallel);
  CHECK(draws_equal(a, c));

  SamplerConfig reseeded = config;
  reseeded.seed = 100;
  const PosteriorDraws d = run_gibbs(sim.matrix, hyper, anchors, reseeded);
  CHECK_FALSE(draws_equal(a, d));
}

TEST_CASE("retained draw accounting matches the config arithmetic") {
  const SynthResult sim = simulate({.n = 8, .m = 10, .d = 1, .seed = 5});
  const Hyperparameters hyper = default_hyperparameters(8, 1);
  const AnchorSpec anchors = two_anchors("L0000", -1.0, "L0001", 1.0);
  SamplerConfig config;
  config.iterations = 107;
  config.burn_in = 20;
  config.thin = 7;
  config.chains = 2;
  const PosteriorDraws draws = run_gibbs(sim.matrix, hyper, anchors, config);
  CHECK(draws.retained_per_chain() == (107 - 20) / 7);
  CHECK(draws.chains[0].iteration.front() == 27);
  CHECK(draws.chains[0].iteration.back() == 27 + 7 * ((107 - 20) / 7 - 1));
  CHECK_FALSE(draws.warnings.empty());  // < 100 retained per chain
}

TEST_CASE("anchored beta draws are constant across the whole run") {
  const SynthResult sim = simulate({.n = 10, .m = 14, .d = 1, .seed = 11});
  const Hyperparameters hyper = default_hyperparameters(10, 1);
  const AnchorSpec anchors = two_anchors("L0002", -1.0, "L0007", 1.0);
  SamplerConfig config;
  config.iterations = 300;
  config.burn_in = 50;
  config.thin = 1;
  config.chains = 2;
  const PosteriorDraws draws = run_gibbs(sim.matrix, hyper, anchors, config);
  for (const auto& chain : draws.chains) {
    CHECK((chain.beta.col(2).array() == -1.0).all());
    CHECK((chain.beta.col(7).array() == 1.0).all());
  }
  CHECK(draws.n_free() == 8);
  CHECK(draws.parameter_count() == 8 * 1 + 14 * 2);
}

TEST_CASE("integrating the augmentation out recovers the Bernoulli model") {
  // Cell frequencies from (a) Bernoulli(Phi(theta)) and (b) the sign of a
  // latent normal draw must agree within 3 standard errors.
  Rng rng(13);
  for (double theta : {-1.5, -0.4, 0.0, 0.8, 2.1}) {
    const int reps = 200000;
    long bern = 0, latent = 0;
    for (int r = 0; r < reps; ++r) {
      if (rng.uniform_open() < norm_cdf(theta)) ++bern;
      if (theta + rng.normal() > 0.0) ++latent;
    }
    const double p = norm_cdf(theta);
    const double se = std::sqrt(2.0 * p * (1.0 - p) / reps);
    const double diff = (static_cast<double>(bern) - static_cast<double>(latent)) / reps;
    CAPTURE(theta);
    CHECK(std::abs(diff) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("toy posterior means match the quadrature oracle") {
  // 2 legislators (1 anchored) voting on 2 motions.
  const RollCallMatrix matrix = votes_matrix(2, 2, {1, 0, 0, 1});
  const double sigma2 = 1.0;
  const Hyperparameters hyper = default_hyperparameters(2, 1, sigma2);
  const AnchorSpec anchors = one_anchor("L0", 1.0);

  Eigen::VectorXd fixed_beta(2);
  fixed_beta << 1.0, 0.0;
  const testutil::GridPosterior oracle =
      testutil::grid_posterior_1d(matrix, {1}, fixed_beta, sigma2);

  SamplerConfig config;
  config.iterations = 30000;
  config.burn_in = 5000;
  config.thin = 5;
  config.chains = 2;
  config.seed = 31;
  const PosteriorDraws draws = run_gibbs(matrix, hyper, anchors, config);

  const double beta_mean = draws.pooled(ParamBlock::beta, 1).mean();
  CHECK_THAT(beta_mean, Catch::Matchers::WithinAbs(oracle.beta_mean[0], 0.05));
  for (int j = 0; j < 2; ++j) {
    CHECK_THAT(draws.pooled(ParamBlock::mu, j).mean(),
               Catch::Matchers::WithinAbs(oracle.mu_mean[static_cast<std::size_t>(j)], 0.05));
    CHECK_THAT(draws.pooled(ParamBlock::alpha, j).mean(),
               Catch::Matchers::WithinAbs(oracle.alpha_mean[static_cast<std::size_t>(j)], 0.05));
  }
}

TEST_CASE("small synthetic recovery reaches a sensible correlation") {
  SynthSpec spec;
  spec.n = 40;
  spec.m = 80;
  spec.alpha_scale = 1.0;
  spec.mu_scale = 0.5;
  spec.seed = 2717;
  const SynthResult sim = simulate(spec);

  // anchor the two most extreme legislators at their true signs
  int lo = 0, hi = 0;
  for (int i = 1; i < spec.n; ++i) {
    if (sim.truth.beta(i, 0) < sim.truth.beta(lo, 0)) lo = i;
    if (sim.truth.beta(i, 0) > sim.truth.beta(hi, 0)) hi = i;
  }
  const AnchorSpec anchors =
      two_anchors(sim.matrix.legislators[static_cast<std::size_t>(lo)].id, -1.0,
                  sim.matrix.legislators[static_cast<std::size_t>(hi)].id, 1.0);

  SamplerConfig config;
  config.iterations = 2500;
  config.burn_in = 500;
  config.thin = 4;
  config.chains = 2;
  config.seed = 8;
  config.threads = 2;
  const PosteriorDraws draws =
      run_gibbs(sim.matrix, default_hyperparameters(spec.n, 1), anchors, config);

  Eigen::VectorXd post_mean(spec.n), truth(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    post_mean(i) = draws.pooled(ParamBlock::beta, i).mean();
    truth(i) = sim.truth.beta(i, 0);
  }
  CHECK(testutil::sign_aligned_correlation(post_mean, truth) > 0.85);
}
