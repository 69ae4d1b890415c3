#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scordant/logistic.hpp"
#include "scordant/newton.hpp"

namespace scordant::ridge {

using logistic::DesignProblem;

/// Per-lambda diagnostics of the l2-regularized fit: the two degrees of
/// freedom, the two biases, and the composite kappa whose smallness licenses
/// the quadratic-approximation analysis.
struct RidgeDiagnostics {
    double lambda = 0.0;
    double d1 = 0.0;  // tr Q(Q+lambda I)^{-1}
    double d2 = 0.0;  // tr Q^2(Q+lambda I)^{-2}
    bool has_w0 = false;
    double b1 = 0.0;  // lambda^2 w0'(Q+lambda I)^{-1} w0
    double b2 = 0.0;  // lambda^2 w0'Q(Q+lambda I)^{-2} w0
    double b1_alt = 0.0;  // lambda^2 w0'Q^{-1}w0, +inf when Q near-singular
    double kappa = 0.0;
    double kappa_bias = 0.0;
    double kappa_var = 0.0;
    double nu0 = 0.0;  // Newton decrement of J_lambda_hat at w0 (NaN without labels)
    MatrixXd Q;
};

struct RidgeFit {
    VectorXd w_hat;
    newton::SolveResult trace;
};

/// Minimizer of J0_hat(w) + lambda/2 ||w||^2, converged to nu <= tol_nu.
RidgeFit fit_ridge(const DesignProblem& problem, double lambda,
                   double tol_nu = 1e-9);
RidgeFit fit_ridge(const DesignProblem& problem, const VectorXd& labels,
                   double lambda, double tol_nu = 1e-9);

RidgeDiagnostics diagnostics(const DesignProblem& problem, double lambda);

struct Theorem1Result {
    double lambda = 0.0;
    double violation_rate = 0.0;
    double rate_ceiling = 0.0;  // delta + 3 sqrt(delta/n_reps)
    int n_reps = 0;
    bool pass = false;
};

/// Monte-Carlo check of the misspecified-model oracle inequality at
/// lambda = 19 R^2 sqrt(log(8/delta)/n). The "for all w0" quantifier is
/// tested on the candidate set {0, numerically found minimizer of J0}.
Theorem1Result theorem1_check(const DesignProblem& problem, double delta,
                              int n_reps, std::uint64_t seed);

struct Theorem2Result {
    RidgeDiagnostics diag;
    double v = 0.0;
    double center = 0.0;       // J0(w0) + (b2 + d2/n)/2
    double half_width = 0.0;   // (b2 + d2/n)(69 v + 2560 kappa)
    double empirical_freq = 0.0;
    double freq_floor = 0.0;   // 1 - e^{-v^2(d2+n b2)} - 3 SE
    int n_reps = 0;
    bool pass = false;
    double mean_excess_risk = 0.0;  // replicate mean of J0(w_hat) - J0(w0)
};

/// Monte-Carlo check of the risk expansion
/// |J0(w_hat) - J0(w0) - (b2 + d2/n)/2| <= (b2 + d2/n)(69v + 2560 kappa).
/// Premises (kappa <= 1/16, v in [0,1/4], v^3 (d2+n b2)^{1/2} <= 12) are
/// enforced with PremiseError.
Theorem2Result theorem2_check(const DesignProblem& problem, double lambda,
                              double v, int n_reps, std::uint64_t seed);

struct Theorem3Result {
    double v = 0.0;
    double half_width = 0.0;
    double empirical_freq = 0.0;
    double freq_floor = 0.0;
    int n_reps = 0;
    bool pass = false;
};

/// Monte-Carlo check of the data-driven criterion residual
/// |J0(w_hat) - criterion - q'w0| <= (b2 + d2/n)(69v + 2560 kappa), using the
/// simulation ground truth for q'w0.
Theorem3Result theorem3_check(const DesignProblem& problem, double lambda,
                              double v, int n_reps, std::uint64_t seed);

struct Prop3Result {
    double nu2 = 0.0;      // nu(J_lambda_hat, w0)^2
    double lhs = 0.0;      // |J0(w_hat) - J0^T(w_N)|
    double rhs = 0.0;
    bool holds = false;
};

/// Quadratic-approximation bound for one realized label vector. Requires the
/// premise nu^2 <= lambda/(4 R^2); refuses otherwise.
Prop3Result prop3_check(const DesignProblem& problem, double lambda,
                        const VectorXd& labels);

/// J0_hat(w_hat) + (1/n) tr Q_hat (Q_hat + lambda I)^{-1} with Q_hat the
/// plug-in weighted Gram matrix at w_hat.
double mallows_criterion(const DesignProblem& problem, double lambda,
                         const VectorXd& labels);

struct KernelReduction {
    MatrixXd T;          // n x p', TT' = K up to the rank truncation
    VectorXd beta;       // primal solution in the square-root coordinates
    VectorXd alpha;      // dual coefficients, TT' alpha = T beta
    VectorXd fitted;     // fitted values T beta = K alpha
    Eigen::Index rank = 0;
};

/// Representer-theorem reduction: square root T of the kernel matrix
/// (eigenvalue truncation at 1e-12 trace(K)), ridge fit on design T, dual
/// coefficients by pseudo-inversion.
KernelReduction rkhs_reduce(const MatrixXd& kernel_matrix, const VectorXd& labels,
                            double lambda, double tol_nu = 1e-9);

/// Logarithmic lambda grid, `per_decade` points per decade over
/// [lo, hi] * R^2.
std::vector<double> lambda_grid(double radius, double lo = 1e-4, double hi = 10.0,
                                int per_decade = 30);

}  // namespace scordant::ridge
