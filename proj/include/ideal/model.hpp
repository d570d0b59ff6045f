#pragma once

// Parameter containers and the probit likelihood of the quadratic spatial
// voting model: Pr(yea) = Phi(mu_j + alpha_j . beta_i).

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "ideal/data.hpp"
#include "ideal/errors.hpp"
#include "ideal/normal.hpp"

namespace ideal {

struct ModelParameters {
  Eigen::VectorXd mu;     // m approval parameters
  Eigen::MatrixXd alpha;  // m x d discrimination parameters
  Eigen::MatrixXd beta;   // n x d ideal points
  int d = 1;

  int n() const { return static_cast<int>(beta.rows()); }
  int m() const { return static_cast<int>(mu.size()); }

  void validate_shapes(const RollCallMatrix& matrix) const {
    if (d < 1) throw ValidationError("dimension d must be >= 1");
    if (mu.size() != matrix.m || alpha.rows() != matrix.m ||
        alpha.cols() != d || beta.rows() != matrix.n || beta.cols() != d) {
      throw ValidationError("model parameter shapes do not match the matrix");
    }
  }
};

struct Hyperparameters {
  Eigen::VectorXd a;               // prior mean of (mu_j, alpha_j), length d+1
  Eigen::MatrixXd A;               // (d+1) x (d+1) SPD prior covariance
  Eigen::MatrixXd b;               // n x d prior means for beta_i
  std::vector<Eigen::MatrixXd> B;  // n SPD d x d prior covariances

  void validate(int n, int d) const {
    if (a.size() != d + 1 || A.rows() != d + 1 || A.cols() != d + 1) {
      throw ValidationError("item prior (a, A) must have dimension d+1");
    }
    if (b.rows() != n || b.cols() != d || static_cast<int>(B.size()) != n) {
      throw ValidationError("ideal-point priors (b_i, B_i) must cover all n legislators");
    }
    auto check_spd = [](const Eigen::MatrixXd& M, const std::string& name) {
      if (!M.isApprox(M.transpose(), 1e-10)) {
        throw ValidationError(name + " is not symmetric");
      }
      Eigen::LLT<Eigen::MatrixXd> llt(M);
      if (llt.info() != Eigen::Success) {
        throw ValidationError(name + " is not positive definite");
      }
    };
    check_spd(A, "A");
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (B[i].rows() != d || B[i].cols() != d) {
        throw ValidationError("B_i must be d x d");
      }
      check_spd(B[i], "B_" + std::to_string(i));
    }
  }
};

// Vague defaults: a = 0, A = sigma2*I, b_i = 0, B_i = I.
inline Hyperparameters default_hyperparameters(int n, int d, double sigma2 = 25.0) {
  if (n < 1) throw DomainError("default_hyperparameters: n must be >= 1");
  if (d < 1) throw DomainError("default_hyperparameters: d must be >= 1");
  if (!(sigma2 > 0.0)) throw DomainError("default_hyperparameters: sigma2 must be positive");
  Hyperparameters hyper;
  hyper.a = Eigen::VectorXd::Zero(d + 1);
  hyper.A = sigma2 * Eigen::MatrixXd::Identity(d + 1, d + 1);
  hyper.b = Eigen::MatrixXd::Zero(n, d);
  hyper.B.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Identity(d, d));
  return hyper;
}

inline double vote_probability(double mu_j, const Eigen::VectorXd& alpha_j,
                               const Eigen::VectorXd& beta_i) {
  if (!std::isfinite(mu_j) || !alpha_j.allFinite() || !beta_i.allFinite()) {
    throw DomainError("vote_probability: inputs must be finite");
  }
  if (alpha_j.size() != beta_i.size()) {
    throw ValidationError("vote_probability: alpha and beta dimensions differ");
  }
  return norm_cdf(mu_j + alpha_j.dot(beta_i));
}

// Log-likelihood over the observed cells; Missing cells contribute nothing.
// log(1 - Phi(t)) is evaluated as log Phi(-t), so the result is finite for
// any finite parameter values.
inline double log_likelihood(const RollCallMatrix& matrix,
                             const ModelParameters& params) {
  params.validate_shapes(matrix);
  double total = 0.0;
  for (int j = 0; j < matrix.m; ++j) {
    for (int i = 0; i < matrix.n; ++i) {
      const Vote v = matrix.vote(i, j);
      if (v == Vote::Missing) continue;
      const double theta = params.mu(j) + params.alpha.row(j).dot(params.beta.row(i));
      total += (v == Vote::Yea) ? log_norm_cdf(theta) : log_norm_cdf(-theta);
    }
  }
  return total;
}

}  // namespace ideal
