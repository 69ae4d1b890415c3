#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "scordant/logistic.hpp"

namespace scordant::concentration {

using logistic::DesignProblem;

/// Quadratic-form instance for the eps'YY'eps tail bound: rows y_i with
/// ||y_i|| <= b, independent mean-zero noise eps_i with |eps_i| <= 1 and
/// standard deviations sigma_i, and S = Diag(sigma) YY' Diag(sigma).
struct QuadFormInstance {
    MatrixXd Y;
    VectorXd sigma;
    double b = 0.0;

    MatrixXd S() const;
    double trace_S() const;
    double trace_S2() const;
    double lambda_max_S() const;

    /// Checks the structural invariants; throws Error on violation.
    void validate() const;
};

/// Samples eps for one replicate; must produce mean-zero entries with
/// |eps_i| <= 1 matching the instance's sigma.
using NoiseSampler = std::function<VectorXd(std::mt19937_64&)>;

/// eps_i = +-sigma_i with equal probability (requires sigma_i <= 1).
NoiseSampler rademacher_noise(const QuadFormInstance& instance);
/// eps_i = y_i/2 - (p_i - 1/2) for a Bernoulli label with P(y=1) = p_i;
/// sigma_i^2 = p_i(1 - p_i).
NoiseSampler centered_bernoulli_noise(const VectorXd& prob);

/// Deviation threshold of the quadratic-form tail claim
/// P[|eps'YY'eps - tr S| >= threshold] <= 8 e^{-u}.
double prop4_bound(const QuadFormInstance& instance, double u);

struct TailPoint {
    double u = 0.0;
    double threshold = 0.0;
    double empirical_tail = 0.0;
    double bound = 0.0;    // 8 e^{-u}
    double ceiling = 0.0;  // bound + 3 sqrt(min(bound,1)/n_draws)
    bool pass = false;
};

struct TailReport {
    std::vector<TailPoint> points;
    double mean_quadform = 0.0;
    double trace_S = 0.0;
    double mean_se = 0.0;  // Monte-Carlo standard error of mean_quadform
    bool all_pass = false;
};

/// Monte-Carlo exceedance frequencies of the Prop-4 threshold on a u-grid.
TailReport tail_check(const QuadFormInstance& instance,
                      const NoiseSampler& sampler,
                      const std::vector<double>& u_grid, int n_draws,
                      std::uint64_t seed);

struct SpecializedTail {
    double u = 0.0;
    double threshold = 0.0;
    double center = 0.0;  // 0 for the misspecified bound, d1/n for Eq. 20
    double probability_bound = 0.0;  // 8 e^{-u}
};

/// Threshold of the misspecified-model tail: the event
/// q'(Q + lambda I)^{-1} q >= 41 R^2 u/(lambda n)
///   + (R^2/lambda)(8 u^2/n^2 + 63 u^{3/2}/n^{3/2}) has probability <= 8e^{-u}.
SpecializedTail misspecified_tail(const DesignProblem& problem, double lambda,
                                  double u);

/// Threshold of the well-specified tail centered at d1/n:
/// |q'(Q+lambda I)^{-1}q - d1/n| >= 32 d2^{1/2} u^{1/2}/n + 18 u/n
///   + 53 R d1^{1/2} u^{3/2}/(n^{3/2} lambda^{1/2}) + 9 R^2 u^2/(lambda n^2).
SpecializedTail wellspecified_tail(const DesignProblem& problem, double lambda,
                                   double u);

/// Monte-Carlo check of either specialized tail over label draws.
struct QuadTailReport {
    std::vector<TailPoint> points;
    double mean_quadform = 0.0;
    double expected_center = 0.0;  // d1/n when well-specified
    double mean_se = 0.0;
    bool all_pass = false;
};
QuadTailReport quadform_tail_check(const DesignProblem& problem, double lambda,
                                   const std::vector<double>& u_grid,
                                   int n_draws, std::uint64_t seed,
                                   bool well_specified);

/// Generic Bernstein deviation threshold sqrt(2 var u) + max_abs u/3;
/// P[|sum| >= threshold] <= 2 e^{-u}.
double bernstein_bound(double variance_sum, double max_abs, double u);

struct BernsteinReport {
    std::vector<TailPoint> points;
    bool all_pass = false;
};

/// Tail check for a sum of independent centered coin flips against the
/// Bernstein threshold (2 e^{-u} claim).
BernsteinReport bernstein_coinflip_check(int n_terms,
                                         const std::vector<double>& u_grid,
                                         int n_draws, std::uint64_t seed);

}  // namespace scordant::concentration
