#pragma once

#include <vector>

#include "scordant/oracle.hpp"
#include "scordant/scfn.hpp"

namespace scordant::newton {

/// Snapshot of the Newton certificate quantities at a point w:
/// decrement nu, lowest Hessian eigenvalue lambda(w), and the error /
/// contraction bounds that hold under the premise R nu <= lambda(w)^{1/2}/2.
struct NewtonCertificate {
    double nu = 0.0;
    double lambda_min_hessian = 0.0;
    double r_constant = 0.0;
    bool premise_holds = false;
    double err_bound_eq8 = 0.0;         // 16 nu^2
    double contraction_ratio_eq9 = 0.0; // (R nu / lambda^{1/2})^2
    double onestep_err_bound_eq10 = 0.0;// 16 R^2 nu^4 / lambda
};

NewtonCertificate certify(const ScfnOracle& oracle, const VectorXd& w);

struct Prop2Verdict {
    bool eq8_ok = false;
    bool eq9_ok = false;
    bool eq10_ok = false;
    double eq8_lhs = 0.0, eq8_rhs = 0.0;
    double eq9_lhs = 0.0, eq9_rhs = 0.0;
    double eq10_lhs = 0.0, eq10_rhs = 0.0;
};

/// Verifies the three certificate bounds against a converged minimizer
/// w_star (||F'(w_star)|| must be at scale 1e-10). Refuses with PremiseError
/// when the premise fails at w -- the bounds are unproven there.
Prop2Verdict verify_prop2(const ScfnOracle& oracle, const VectorXd& w,
                          const VectorXd& w_star);

struct IterationRecord {
    double nu = 0.0;
    double lambda_min = 0.0;
    double step_size = 1.0;
    double value = 0.0;
};

struct SolveResult {
    VectorXd w_star;
    int iterations = 0;
    NewtonCertificate final_certificate;
    NewtonCertificate worst_certificate;  // worst premise margin along the path
    std::vector<IterationRecord> trace;
};

struct SolveOptions {
    double tol_nu = 1e-9;
    int max_iterations = 500;
    double armijo = 1e-4;
};

/// Newton's method with backtracking line search (Armijo, halving); switches
/// to full steps once R nu / lambda^{1/2} <= 1/4. `ridge` adds
/// ridge/2 ||w||^2 to the objective before solving. Deterministic.
SolveResult solve(const ScfnOracle& oracle, const VectorXd& w_init,
                  double ridge = 0.0, const SolveOptions& options = {});

/// One-step Newton iterate w - F''(w)^{-1} F'(w).
VectorXd one_step_newton(const ScfnOracle& oracle, const VectorXd& w);

}  // namespace scordant::newton
