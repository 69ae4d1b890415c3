#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "scordant/oracle.hpp"

namespace scordant::logistic {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Numerically stable sigmoid (1+e^{-u})^{-1}.
double sigmoid(double u);

/// ell(u) = log(e^{-u/2} + e^{u/2}), computed as |u|/2 + log1p(e^{-|u|}).
double ell(double u);
double ell_d1(double u);  // sigma(u) - 1/2
double ell_d2(double u);  // sigma(u)(1 - sigma(u))
double ell_d3(double u);  // sigma(1 - sigma)(1 - 2 sigma)

/// Fixed-design logistic instance. Immutable after construction; samplers
/// take explicit seeds, so replicate generation is safe to run concurrently.
struct DesignProblem {
    MatrixXd X;                          // n x p
    std::optional<VectorXd> labels;      // entries in {-1,+1}
    std::optional<VectorXd> label_prob;  // P(y_i = 1), in (0,1)
    std::optional<VectorXd> w0;          // generating vector when well-specified
    double radius_R = 0.0;               // max_i ||x_i||_2
    bool well_specified = false;
    bool normalized = false;             // per-covariate mean-square <= 1

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }

    /// Recomputes radius_R from X.
    void set_radius() { radius_R = X.rowwise().norm().maxCoeff(); }

    /// Checks the structural invariants; throws Error on violation.
    void validate() const;
};

/// Oracle for the empirical objective J0_hat (mean logistic loss), with
/// r_constant = radius_R. Requires labels. The oracle captures its own copy
/// of the data, so the problem need not outlive it.
ScfnOracle empirical_objective(const DesignProblem& problem);
ScfnOracle empirical_objective(const DesignProblem& problem, const VectorXd& labels);

/// Oracle for the population objective J0 = E[J0_hat]. Requires label_prob.
ScfnOracle population_objective(const DesignProblem& problem);

/// Independent label draws y_i in {-1,+1} with P(y_i = 1) = label_prob[i].
/// The (seed, counter) pair selects an independent substream, so replicate r
/// of a Monte-Carlo loop uses counter = r.
VectorXd sample_labels(const DesignProblem& problem, std::uint64_t seed);
VectorXd sample_labels(const DesignProblem& problem, std::uint64_t seed,
                       std::uint64_t counter);

/// Variances sigma_i^2 = var(y_i/2) = p_i(1-p_i); equals ell''(w0'x_i) when
/// the model is well-specified.
struct NoiseModel {
    VectorXd sigma2;
};
NoiseModel noise_model(const DesignProblem& problem);

/// Realized noise eps_i = y_i/2 - E(y_i/2).
VectorXd noise_from_labels(const DesignProblem& problem, const VectorXd& labels);

/// q = (1/n) X' eps.
VectorXd q_vector(const DesignProblem& problem, const VectorXd& labels);
VectorXd sample_q(const DesignProblem& problem, std::uint64_t seed);

/// Weighted Gram matrix Q = (1/n) X' Diag(sigma_i^2) X.
MatrixXd weighted_gram(const DesignProblem& problem);

/// Returns a copy of `problem` with the given labels installed.
DesignProblem with_labels(const DesignProblem& problem, const VectorXd& labels);

}  // namespace scordant::logistic
