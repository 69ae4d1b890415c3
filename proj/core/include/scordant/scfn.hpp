#pragma once

#include "scordant/oracle.hpp"

namespace scordant::scfn {

struct TaylorSandwich {
    double lower = 0.0;
    double upper = 0.0;
    double value_at_w_plus_v = 0.0;
};

/// Second-order sandwich of F(w+v):
///   lower = F(w) + v'F'(w) + (v'F''(w)v) phi_minus(R||v||),
///   upper = F(w) + v'F'(w) + (v'F''(w)v) phi_plus(R||v||).
/// The value at w+v is returned so callers can assert lower <= value <= upper.
TaylorSandwich taylor_sandwich(const ScfnOracle& oracle, const VectorXd& w,
                               const VectorXd& v);

struct GradientExpansionBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// First-order expansion bound of F':
///   z'[F'(w+v) - F'(w) - F''(w)v] / (z'F''(w)z)^{1/2}
///     <= (v'F''(w)v)^{1/2} psi(R||v||).
/// Throws on a degenerate z direction (z'F''(w)z <= 0).
GradientExpansionBound gradient_expansion_bound(const ScfnOracle& oracle,
                                                const VectorXd& w,
                                                const VectorXd& v,
                                                const VectorXd& z);

struct HessianSandwich {
    double lower_factor = 1.0;
    double upper_factor = 1.0;
    bool holds = false;
};

/// Zero-order sandwich of F'':
///   e^{-R||v||} F''(w) <= F''(w+v) <= e^{R||v||} F''(w)
/// verified through the smallest eigenvalue of the two difference matrices
/// (slack 1e-9 times the trace scale).
HessianSandwich hessian_sandwich(const ScfnOracle& oracle, const VectorXd& w,
                                 const VectorXd& v);

struct HessianDifferenceBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// z'[F''(w+v) - F''(w)]u
///   <= (e^{R||v||}-1)/||v|| (v'F''(w)v)^{1/2} (z'F''(w)z)^{1/2} ||u||.
/// At v = 0 the leading factor takes its continuous extension R.
HessianDifferenceBound hessian_difference_bound(const ScfnOracle& oracle,
                                                const VectorXd& w,
                                                const VectorXd& v,
                                                const VectorXd& z,
                                                const VectorXd& u);

struct UnivariateSandwich {
    double lower = 0.0;
    double upper = 0.0;
};

/// Sandwich for a scalar convex g with |g'''| <= S g'':
///   g(0) + g'(0)t + g''(0) S^{-2}(e^{-St} + St - 1)
///     <= g(t) <=
///   g(0) + g'(0)t + g''(0) S^{-2}(e^{St} - St - 1).
/// S = 0 degrades to the exact quadratic g''(0) t^2 / 2 on both sides.
UnivariateSandwich univariate_sandwich(double g_value0, double g_prime0,
                                       double g_second0, double s, double t);

struct NewtonDecrement {
    double nu = 0.0;
    VectorXd step;
    double lambda_min = 0.0;
};

/// Newton step -F''(w)^{-1}F'(w) and decrement nu(F,w) with
/// nu^2 = F'(w)'F''(w)^{-1}F'(w). Throws SingularHessianError when the
/// smallest Hessian eigenvalue is below 1e-12 times the trace scale.
NewtonDecrement newton_decrement(const ScfnOracle& oracle, const VectorXd& w);

}  // namespace scordant::scfn
