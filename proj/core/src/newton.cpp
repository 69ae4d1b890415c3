#include "scordant/newton.hpp"

#include <cmath>
#include <limits>

#include "scordant/linalg.hpp"

namespace scordant::newton {

namespace {

NewtonCertificate certificate_from(double nu, double lambda_min, double r) {
    NewtonCertificate c;
    c.nu = nu;
    c.lambda_min_hessian = lambda_min;
    c.r_constant = r;
    c.premise_holds = lambda_min > 0.0 && r * nu <= 0.5 * std::sqrt(lambda_min);
    c.err_bound_eq8 = 16.0 * nu * nu;
    c.contraction_ratio_eq9 =
        lambda_min > 0.0 ? (r * nu) * (r * nu) / lambda_min : std::numeric_limits<double>::infinity();
    c.onestep_err_bound_eq10 =
        lambda_min > 0.0 ? 16.0 * r * r * std::pow(nu, 4) / lambda_min
                         : std::numeric_limits<double>::infinity();
    return c;
}

bool leq_with_slack(double lhs, double rhs) {
    return lhs <= rhs + 1e-9 * (std::abs(rhs) + 1.0);
}

}  // namespace

NewtonCertificate certify(const ScfnOracle& oracle, const VectorXd& w) {
    const scfn::NewtonDecrement nd = scfn::newton_decrement(oracle, w);
    return certificate_from(nd.nu, nd.lambda_min, oracle.r_constant);
}

Prop2Verdict verify_prop2(const ScfnOracle& oracle, const VectorXd& w,
                          const VectorXd& w_star) {
    const NewtonCertificate cert = certify(oracle, w);
    if (!cert.premise_holds) {
        throw PremiseError("verify_prop2: premise R nu <= lambda^{1/2}/2 fails at w");
    }
    const double grad_scale = 1.0 + oracle.gradient(w).norm();
    if (oracle.gradient(w_star).norm() > 1e-10 * grad_scale) {
        throw Error("verify_prop2: w_star is not a converged minimizer");
    }

    Prop2Verdict v;
    const MatrixXd h = oracle.hessian(w);
    const VectorXd d = w - w_star;
    v.eq8_lhs = d.dot(h * d);
    v.eq8_rhs = cert.err_bound_eq8;
    v.eq8_ok = leq_with_slack(v.eq8_lhs, v.eq8_rhs);

    const VectorXd w_next = one_step_newton(oracle, w);
    const NewtonCertificate cert_next = certify(oracle, w_next);
    v.eq9_lhs = std::sqrt(cert_next.contraction_ratio_eq9);
    v.eq9_rhs = cert.contraction_ratio_eq9;
    v.eq9_ok = leq_with_slack(v.eq9_lhs, v.eq9_rhs);

    const VectorXd e = w_next - w_star;
    v.eq10_lhs = e.dot(h * e);
    v.eq10_rhs = cert.onestep_err_bound_eq10;
    v.eq10_ok = leq_with_slack(v.eq10_lhs, v.eq10_rhs);
    return v;
}

VectorXd one_step_newton(const ScfnOracle& oracle, const VectorXd& w) {
    return w + scfn::newton_decrement(oracle, w).step;
}

SolveResult solve(const ScfnOracle& oracle, const VectorXd& w_init, double ridge,
                  const SolveOptions& options) {
    const ScfnOracle f = ridge > 0.0 ? add_ridge(oracle, ridge) : oracle;
    SolveResult out;
    VectorXd w = w_init;
    double worst_margin = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const MatrixXd h = f.hessian(w);
        const VectorXd g = f.gradient(w);
        const double tol = 1e-12 * trace_scale(h);

        Eigen::LLT<MatrixXd> llt(h);
        MatrixXd h_used = h;
        if (llt.info() != Eigen::Success) {
            h_used.diagonal().array() += 1e-12 * trace_scale(h);
            llt.compute(h_used);
            if (llt.info() != Eigen::Success) {
                throw SingularHessianError("solve: Hessian factorization failed",
                                           SymEig(h).min_eigenvalue());
            }
        }
        const VectorXd step = -llt.solve(g);
        const double nu2 = -g.dot(step);
        const double nu = std::sqrt(std::max(nu2, 0.0));
        const double lambda_min = SymEig(h_used).min_eigenvalue();
        if (lambda_min <= tol) {
            throw SingularHessianError("solve: Hessian not positive definite", lambda_min);
        }

        const NewtonCertificate cert = certificate_from(nu, lambda_min, f.r_constant);
        const double margin = 0.5 * std::sqrt(lambda_min) - f.r_constant * nu;
        if (margin < worst_margin) {
            worst_margin = margin;
            out.worst_certificate = cert;
        }

        IterationRecord rec;
        rec.nu = nu;
        rec.lambda_min = lambda_min;
        rec.value = f.value(w);
        if (!std::isfinite(rec.value)) {
            throw EvaluationError("solve: non-finite objective value");
        }

        if (nu <= options.tol_nu) {
            rec.step_size = 0.0;
            out.trace.push_back(rec);
            out.w_star = w;
            out.iterations = iter;
            out.final_certificate = cert;
            return out;
        }

        const bool quadratic_phase =
            f.r_constant * nu <= 0.25 * std::sqrt(lambda_min);
        double alpha = 1.0;
        if (!quadratic_phase) {
            const double slope = g.dot(step);
            int backtracks = 0;
            while (f.value(w + alpha * step) >
                   rec.value + options.armijo * alpha * slope) {
                alpha *= 0.5;
                if (++backtracks > 60) {
                    throw ConvergenceError("solve: line search failed (non-finite step?)");
                }
            }
        }
        rec.step_size = alpha;
        out.trace.push_back(rec);
        w += alpha * step;
        if (!w.allFinite()) {
            throw EvaluationError("solve: non-finite iterate");
        }
    }
    throw ConvergenceError("solve: iteration cap exceeded (minimum may be at infinity)");
}

}  // namespace scordant::newton
