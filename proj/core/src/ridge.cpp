#include "scordant/ridge.hpp"

#include <cmath>
#include <limits>

#include "scordant/linalg.hpp"

namespace scordant::ridge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_or(double num, double denom_sq, double degenerate) {
    // num / sqrt(denom_sq) with the 0/0 convention `degenerate`
    if (denom_sq > 0.0) return num / std::sqrt(denom_sq);
    return num > 0.0 ? kInf : degenerate;
}

// Monte-Carlo slack: three standard errors with `p` as the Bernoulli
// variance proxy.
double mc_cushion(double p, int n_reps) {
    return 3.0 * std::sqrt(std::max(p, 0.0) / static_cast<double>(n_reps));
}

}  // namespace

RidgeFit fit_ridge(const DesignProblem& problem, double lambda, double tol_nu) {
    if (!problem.labels) throw Error("fit_ridge: labels missing");
    return fit_ridge(problem, *problem.labels, lambda, tol_nu);
}

RidgeFit fit_ridge(const DesignProblem& problem, const VectorXd& labels,
                   double lambda, double tol_nu) {
    if (!(lambda > 0.0)) throw Error("fit_ridge: lambda must be positive");
    newton::SolveOptions opts;
    opts.tol_nu = tol_nu;
    const ScfnOracle obj = logistic::empirical_objective(problem, labels);
    RidgeFit fit;
    fit.trace = newton::solve(obj, VectorXd::Zero(problem.p()), lambda, opts);
    fit.w_hat = fit.trace.w_star;
    return fit;
}

RidgeDiagnostics diagnostics(const DesignProblem& problem, double lambda) {
    if (!(lambda > 0.0)) throw Error("diagnostics: lambda must be positive");
    RidgeDiagnostics d;
    d.lambda = lambda;
    d.Q = logistic::weighted_gram(problem);
    const SymEig eig(d.Q);
    const VectorXd& mu = eig.eigenvalues();
    const double n = static_cast<double>(problem.n());
    const double r = problem.radius_R;

    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        const double m = std::max(mu(k), 0.0);
        d.d1 += m / (m + lambda);
        d.d2 += m * m / ((m + lambda) * (m + lambda));
    }

    d.has_w0 = problem.w0.has_value();
    if (d.has_w0) {
        const VectorXd c = eig.eigenvectors().transpose() * *problem.w0;
        const double q_floor = 1e-10 * trace_scale(d.Q);
        bool q_invertible = eig.min_eigenvalue() > q_floor;
        d.b1_alt = 0.0;
        for (Eigen::Index k = 0; k < mu.size(); ++k) {
            const double m = std::max(mu(k), 0.0);
            const double c2 = c(k) * c(k);
            d.b1 += lambda * lambda * c2 / (m + lambda);
            d.b2 += lambda * lambda * m * c2 / ((m + lambda) * (m + lambda));
            if (q_invertible) d.b1_alt += lambda * lambda * c2 / m;
        }
        if (!q_invertible) d.b1_alt = kInf;
    }

    const double scale = r / std::sqrt(lambda);
    if (scale > 0.0) {
        d.kappa = scale * ratio_or(d.d1 / n + d.b1, d.d2 / n + d.b2, 0.0);
        d.kappa_bias = scale * ratio_or(d.b1, d.b2, 0.0);
        d.kappa_var = scale * ratio_or(d.d1 / n, d.d2 / n, 0.0);
    }  // R = 0: Eq. 11 vanishes identically (square-loss analogue)

    d.nu0 = std::numeric_limits<double>::quiet_NaN();
    if (problem.labels && problem.w0) {
        const ScfnOracle obj =
            add_ridge(logistic::empirical_objective(problem), lambda);
        d.nu0 = scfn::newton_decrement(obj, *problem.w0).nu;
    }
    return d;
}

namespace {

// Numerical minimizer of the population objective, used as the nontrivial
// w0-candidate in the Theorem 1 quantifier. Falls back through increasing
// regularization when the unregularized problem is degenerate.
VectorXd population_minimizer(const DesignProblem& problem) {
    const ScfnOracle j0 = logistic::population_objective(problem);
    const VectorXd w_init = VectorXd::Zero(problem.p());
    for (double ridge : {0.0, 1e-10, 1e-6}) {
        try {
            return newton::solve(j0, w_init, ridge).w_star;
        } catch (const Error&) {
        }
    }
    return w_init;
}

}  // namespace

Theorem1Result theorem1_check(const DesignProblem& problem, double delta,
                              int n_reps, std::uint64_t seed) {
    if (!(delta > 0.0 && delta < 1.0)) throw Error("theorem1_check: delta in (0,1)");
    if (!problem.label_prob) throw Error("theorem1_check: label_prob missing");
    const double n = static_cast<double>(problem.n());
    const double r = problem.radius_R;
    const double s = std::sqrt(std::log(8.0 / delta) / n);

    Theorem1Result out;
    out.lambda = 19.0 * r * r * s;
    out.n_reps = n_reps;

    const ScfnOracle j0 = logistic::population_objective(problem);
    std::vector<VectorXd> candidates;
    candidates.push_back(VectorXd::Zero(problem.p()));
    candidates.push_back(population_minimizer(problem));
    std::vector<double> rhs;
    for (const VectorXd& w0c : candidates) {
        rhs.push_back(j0.value(w0c) +
                      (10.0 + 100.0 * r * r * w0c.squaredNorm()) * s);
    }

    int violations = 0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, seed, rep);
        const RidgeFit fit = fit_ridge(problem, y, out.lambda);
        const double risk = j0.value(fit.w_hat);
        for (double bound : rhs) {
            if (risk > bound) {
                ++violations;
                break;
            }
        }
    }
    out.violation_rate = static_cast<double>(violations) / n_reps;
    out.rate_ceiling = delta + mc_cushion(delta, n_reps);
    out.pass = out.violation_rate <= out.rate_ceiling;
    return out;
}

namespace {

void require_theorem2_premises(const DesignProblem& problem,
                               const RidgeDiagnostics& diag, double v) {
    if (!problem.well_specified || !problem.w0 || !problem.label_prob) {
        throw PremiseError("theorem2: requires a well-specified instance with w0");
    }
    const double n = static_cast<double>(problem.n());
    const double d2nb2 = diag.d2 + n * diag.b2;
    if (!(diag.kappa <= 1.0 / 16.0)) {
        throw PremiseError("theorem2: kappa > 1/16");
    }
    if (!(v >= 0.0 && v <= 0.25)) {
        throw PremiseError("theorem2: v outside [0, 1/4]");
    }
    if (!(v * v * v * std::sqrt(d2nb2) <= 12.0)) {
        throw PremiseError("theorem2: v^3 (d2 + n b2)^{1/2} > 12");
    }
}

}  // namespace

Theorem2Result theorem2_check(const DesignProblem& problem, double lambda,
                              double v, int n_reps, std::uint64_t seed) {
    Theorem2Result out;
    out.diag = diagnostics(problem, lambda);
    out.v = v;
    out.n_reps = n_reps;
    require_theorem2_premises(problem, out.diag, v);

    const double n = static_cast<double>(problem.n());
    const double e2 = out.diag.b2 + out.diag.d2 / n;
    const ScfnOracle j0 = logistic::population_objective(problem);
    const double risk0 = j0.value(*problem.w0);
    out.center = risk0 + 0.5 * e2;
    out.half_width = e2 * (69.0 * v + 2560.0 * out.diag.kappa);

    const double fail_p = std::exp(-v * v * (out.diag.d2 + n * out.diag.b2));
    int holds = 0;
    double excess_sum = 0.0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, seed, rep);
        const double risk = j0.value(fit_ridge(problem, y, lambda).w_hat);
        excess_sum += risk - risk0;
        if (std::abs(risk - out.center) <=
            out.half_width + 1e-12 * (std::abs(out.center) + 1.0)) {
            ++holds;
        }
    }
    out.empirical_freq = static_cast<double>(holds) / n_reps;
    out.mean_excess_risk = excess_sum / n_reps;
    out.freq_floor = 1.0 - fail_p - mc_cushion(fail_p, n_reps);
    out.pass = out.empirical_freq >= out.freq_floor;
    return out;
}

Theorem3Result theorem3_check(const DesignProblem& problem, double lambda,
                              double v, int n_reps, std::uint64_t seed) {
    const RidgeDiagnostics diag = diagnostics(problem, lambda);
    require_theorem2_premises(problem, diag, v);

    Theorem3Result out;
    out.v = v;
    out.n_reps = n_reps;
    const double n = static_cast<double>(problem.n());
    const double e2 = diag.b2 + diag.d2 / n;
    out.half_width = e2 * (69.0 * v + 2560.0 * diag.kappa);

    const ScfnOracle j0 = logistic::population_objective(problem);
    const double fail_p = std::exp(-v * v * (diag.d2 + n * diag.b2));
    int holds = 0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, seed, rep);
        const RidgeFit fit = fit_ridge(problem, y, lambda);
        const ScfnOracle j0_hat = logistic::empirical_objective(problem, y);
        const SymEig eig(j0_hat.hessian(fit.w_hat));
        double df = 0.0;
        for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
            const double m = std::max(eig.eigenvalues()(k), 0.0);
            df += m / (m + lambda);
        }
        const double crit = j0_hat.value(fit.w_hat) + df / n;
        // q'w0 uses the simulation ground truth; the paper offers no
        // data-driven estimate of this term.
        const double qw0 = logistic::q_vector(problem, y).dot(*problem.w0);
        const double residual = j0.value(fit.w_hat) - crit - qw0;
        if (std::abs(residual) <= out.half_width + 1e-12) ++holds;
    }
    out.empirical_freq = static_cast<double>(holds) / n_reps;
    out.freq_floor = 1.0 - fail_p - mc_cushion(fail_p, n_reps);
    out.pass = out.empirical_freq >= out.freq_floor;
    return out;
}

Prop3Result prop3_check(const DesignProblem& problem, double lambda,
                        const VectorXd& labels) {
    if (!problem.w0 || !problem.label_prob) {
        throw Error("prop3_check: needs w0 and label_prob");
    }
    const double r = problem.radius_R;
    const VectorXd& w0 = *problem.w0;

    const ScfnOracle j_lambda =
        add_ridge(logistic::empirical_objective(problem, labels), lambda);
    const double nu = scfn::newton_decrement(j_lambda, w0).nu;

    Prop3Result out;
    out.nu2 = nu * nu;
    if (!(out.nu2 <= lambda / (4.0 * r * r))) {
        throw PremiseError("prop3_check: nu^2 > lambda / (4 R^2)");
    }

    const MatrixXd q_mat = logistic::weighted_gram(problem);
    const VectorXd q = logistic::q_vector(problem, labels);
    MatrixXd q_reg = q_mat;
    q_reg.diagonal().array() += lambda;
    const VectorXd w_newton = w0 + q_reg.llt().solve(q - lambda * w0);

    const ScfnOracle j0 = logistic::population_objective(problem);
    const VectorXd g0 = j0.gradient(w0);
    const double j0_w0 = j0.value(w0);
    const VectorXd d = w_newton - w0;
    // Quadratic expansion of J0 at w0 with Hessian Q (well-specified
    // curvature), evaluated at the one-step Newton iterate.
    const double j0_taylor = j0_w0 + g0.dot(d) + 0.5 * d.dot(q_mat * d);

    const RidgeFit fit = fit_ridge(problem, labels, lambda);
    out.lhs = std::abs(j0.value(fit.w_hat) - j0_taylor);
    const double q_half_norm = std::sqrt(std::max(d.dot(q_mat * d), 0.0));
    out.rhs = 15.0 * r * out.nu2 / std::sqrt(lambda) * q_half_norm +
              40.0 * r * r * out.nu2 * out.nu2 / lambda;
    out.holds = out.lhs <= out.rhs + 1e-9 * (out.rhs + 1.0);
    return out;
}

double mallows_criterion(const DesignProblem& problem, double lambda,
                         const VectorXd& labels) {
    const RidgeFit fit = fit_ridge(problem, labels, lambda);
    const ScfnOracle j0_hat = logistic::empirical_objective(problem, labels);
    const MatrixXd q_hat = j0_hat.hessian(fit.w_hat);
    const SymEig eig(q_hat);
    double df = 0.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double m = std::max(eig.eigenvalues()(k), 0.0);
        df += m / (m + lambda);
    }
    return j0_hat.value(fit.w_hat) + df / static_cast<double>(problem.n());
}

KernelReduction rkhs_reduce(const MatrixXd& kernel_matrix, const VectorXd& labels,
                            double lambda, double tol_nu) {
    const SymEig eig(kernel_matrix);
    const double trace = trace_scale(kernel_matrix);
    if (eig.min_eigenvalue() < -1e-8 * trace) {
        throw Error("rkhs_reduce: kernel matrix is not positive semidefinite");
    }

    const double cutoff = 1e-12 * trace;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        if (eig.eigenvalues()(k) >= cutoff) kept.push_back(k);
    }

    KernelReduction red;
    red.rank = static_cast<Eigen::Index>(kept.size());
    red.T.resize(kernel_matrix.rows(), red.rank);
    for (Eigen::Index j = 0; j < red.rank; ++j) {
        red.T.col(j) =
            eig.eigenvectors().col(kept[j]) * std::sqrt(eig.eigenvalues()(kept[j]));
    }

    DesignProblem reduced;
    reduced.X = red.T;
    reduced.labels = labels;
    reduced.set_radius();
    red.beta = fit_ridge(reduced, labels, lambda, tol_nu).w_hat;
    red.fitted = red.T * red.beta;
    red.alpha = eig.solve(red.fitted, cutoff);
    return red;
}

std::vector<double> lambda_grid(double radius, double lo, double hi,
                                int per_decade) {
    const double r2 = radius * radius;
    const int steps =
        static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
    std::vector<double> grid;
    grid.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        grid.push_back(r2 * lo * std::pow(10.0, static_cast<double>(i) / per_decade));
    }
    return grid;
}

}  // namespace scordant::ridge
