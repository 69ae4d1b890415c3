#include "scordant/scfn.hpp"

#include <cmath>
#include <sstream>

#include "scordant/linalg.hpp"
#include "scordant/remainder.hpp"

namespace scordant::scfn {

namespace {

void require_finite(double x, const char* what, const VectorXd& point) {
    if (!std::isfinite(x)) {
        std::ostringstream oss;
        oss << "non-finite " << what << " at point [";
        for (Eigen::Index i = 0; i < point.size(); ++i) {
            oss << (i ? ", " : "") << point(i);
        }
        oss << "]";
        throw EvaluationError(oss.str());
    }
}

}  // namespace

TaylorSandwich taylor_sandwich(const ScfnOracle& oracle, const VectorXd& w,
                               const VectorXd& v) {
    TaylorSandwich out;
    const double fw = oracle.value(w);
    require_finite(fw, "value", w);
    out.value_at_w_plus_v = oracle.value(w + v);
    require_finite(out.value_at_w_plus_v, "value", w + v);
    if (v.norm() == 0.0) {
        out.lower = out.upper = fw;
        return out;
    }
    const double lin = fw + v.dot(oracle.gradient(w));
    const double quad = v.dot(oracle.hessian(w) * v);
    require_finite(lin, "gradient term", w);
    require_finite(quad, "hessian quadratic form", w);
    const double u = oracle.r_constant * v.norm();
    out.lower = lin + quad * phi_minus(u);
    out.upper = lin + quad * phi_plus(u);
    return out;
}

GradientExpansionBound gradient_expansion_bound(const ScfnOracle& oracle,
                                                const VectorXd& w,
                                                const VectorXd& v,
                                                const VectorXd& z) {
    const MatrixXd h = oracle.hessian(w);
    const double zhz = z.dot(h * z);
    if (!(zhz > 0.0)) {
        throw EvaluationError("degenerate direction: z'F''(w)z <= 0");
    }
    GradientExpansionBound out;
    const VectorXd diff = oracle.gradient(w + v) - oracle.gradient(w) - h * v;
    out.lhs = z.dot(diff) / std::sqrt(zhz);
    require_finite(out.lhs, "gradient expansion", w);
    out.rhs = std::sqrt(std::max(v.dot(h * v), 0.0)) * psi(oracle.r_constant * v.norm());
    return out;
}

HessianSandwich hessian_sandwich(const ScfnOracle& oracle, const VectorXd& w,
                                 const VectorXd& v) {
    HessianSandwich out;
    const MatrixXd hw = oracle.hessian(w);
    const MatrixXd hwv = oracle.hessian(w + v);
    const double u = oracle.r_constant * v.norm();
    out.lower_factor = std::exp(-u);
    out.upper_factor = std::exp(u);
    const double slack = 1e-9 * std::max(trace_scale(hw), trace_scale(hwv));
    const double lo = SymEig(MatrixXd(hwv - out.lower_factor * hw)).min_eigenvalue();
    const double hi = SymEig(MatrixXd(out.upper_factor * hw - hwv)).min_eigenvalue();
    out.holds = lo >= -slack && hi >= -slack;
    return out;
}

HessianDifferenceBound hessian_difference_bound(const ScfnOracle& oracle,
                                                const VectorXd& w,
                                                const VectorXd& v,
                                                const VectorXd& z,
                                                const VectorXd& u) {
    HessianDifferenceBound out;
    const MatrixXd hw = oracle.hessian(w);
    out.lhs = z.dot((oracle.hessian(w + v) - hw) * u);
    require_finite(out.lhs, "hessian difference", w);
    const double r = oracle.r_constant;
    // (e^{R||v||}-1)/||v|| = R * expm1_over(R||v||), continuous at v = 0.
    const double lead = r * expm1_over(r * v.norm());
    out.rhs = lead * std::sqrt(std::max(v.dot(hw * v), 0.0)) *
              std::sqrt(std::max(z.dot(hw * z), 0.0)) * u.norm();
    return out;
}

UnivariateSandwich univariate_sandwich(double g_value0, double g_prime0,
                                       double g_second0, double s, double t) {
    UnivariateSandwich out;
    const double lin = g_value0 + g_prime0 * t;
    const double u = s * t;
    // g''(0) S^{-2}(e^{±St} ∓ St - 1) = g''(0) t^2 phi_±(St), valid at S = 0.
    out.lower = lin + g_second0 * t * t * phi_minus(u);
    out.upper = lin + g_second0 * t * t * phi_plus(u);
    return out;
}

NewtonDecrement newton_decrement(const ScfnOracle& oracle, const VectorXd& w) {
    NewtonDecrement out;
    const MatrixXd h = oracle.hessian(w);
    SymEig eig(h);
    out.lambda_min = eig.min_eigenvalue();
    const double tol = 1e-12 * trace_scale(h);
    if (out.lambda_min <= tol) {
        std::ostringstream oss;
        oss << "singular Hessian in newton_decrement: lambda_min = " << out.lambda_min;
        throw SingularHessianError(oss.str(), out.lambda_min);
    }
    const VectorXd g = oracle.gradient(w);
    out.step = -eig.solve(g, tol);
    out.nu = std::sqrt(std::max(-g.dot(out.step), 0.0));
    require_finite(out.nu, "newton decrement", w);
    return out;
}

}  // namespace scordant::scfn
