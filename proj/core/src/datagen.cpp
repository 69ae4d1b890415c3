#include "scordant/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "scordant/linalg.hpp"
#include "scordant/rng.hpp"

namespace scordant::datagen {

namespace {

MatrixXd gaussian_matrix(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng) {
    MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) x(i, j) = normal(rng);
    }
    return x;
}

MatrixXd build_design(const InstanceSpec& spec, std::mt19937_64& rng) {
    switch (spec.design) {
        case InstanceSpec::Design::gaussian:
            return gaussian_matrix(spec.n, spec.p, rng);
        case InstanceSpec::Design::orthogonal: {
            if (spec.p > spec.n) throw Error("generate: orthogonal needs p <= n");
            const MatrixXd g = gaussian_matrix(spec.n, spec.p, rng);
            const Eigen::HouseholderQR<MatrixXd> qr(g);
            const MatrixXd q1 = qr.householderQ() *
                                MatrixXd::Identity(spec.n, spec.p);
            return std::sqrt(static_cast<double>(spec.n)) * q1;
        }
        case InstanceSpec::Design::correlated: {
            MatrixXd cov(spec.p, spec.p);
            for (Eigen::Index j = 0; j < spec.p; ++j) {
                for (Eigen::Index k = 0; k < spec.p; ++k) {
                    cov(j, k) = std::pow(spec.corr, std::abs(double(j - k)));
                }
            }
            return gaussian_matrix(spec.n, spec.p, rng) * SymEig(cov).sqrt();
        }
        case InstanceSpec::Design::collinear: {
            if (spec.p < 3) throw Error("generate: collinear needs p >= 3");
            MatrixXd x = gaussian_matrix(spec.n, spec.p, rng);
            x.col(spec.p - 1) = spec.collinear_factor * (x.col(0) + x.col(1));
            return x;
        }
        case InstanceSpec::Design::kernel: {
            VectorXd t(spec.n);
            for (Eigen::Index i = 0; i < spec.n; ++i) t(i) = uniform01(rng);
            MatrixXd k(spec.n, spec.n);
            for (Eigen::Index i = 0; i < spec.n; ++i) {
                for (Eigen::Index j = 0; j < spec.n; ++j) {
                    if (spec.kernel_kind == "brownian") {
                        k(i, j) = std::min(t(i), t(j));
                    } else {  // rbf
                        const double d = t(i) - t(j);
                        k(i, j) = std::exp(-d * d /
                                           (2.0 * spec.bandwidth * spec.bandwidth));
                    }
                }
            }
            const SymEig eig(k);
            const double cutoff = 1e-12 * trace_scale(k);
            std::vector<Eigen::Index> kept;
            for (Eigen::Index j = 0; j < spec.n; ++j) {
                if (eig.eigenvalues()(j) >= cutoff) kept.push_back(j);
            }
            // keep the largest spec.p kernel components when p is given
            const auto cols =
                spec.p > 0
                    ? std::min<Eigen::Index>(spec.p,
                                             static_cast<Eigen::Index>(kept.size()))
                    : static_cast<Eigen::Index>(kept.size());
            MatrixXd x(spec.n, cols);
            for (Eigen::Index j = 0; j < cols; ++j) {
                const Eigen::Index src = kept[kept.size() - 1 - j];
                x.col(j) = eig.eigenvectors().col(src) *
                           std::sqrt(eig.eigenvalues()(src));
            }
            return x;
        }
    }
    throw Error("generate: unknown design kind");
}

VectorXd build_w0(const InstanceSpec& spec, Eigen::Index p,
                  std::mt19937_64& rng) {
    VectorXd w0 = VectorXd::Zero(p);
    switch (spec.w0_kind) {
        case InstanceSpec::W0::zero:
            break;
        case InstanceSpec::W0::sparse: {
            if (spec.sparsity > p) throw Error("generate: sparsity exceeds p");
            if (!(spec.amplitude > 0.0)) {
                throw Error("generate: sparse w0 needs a positive amplitude");
            }
            for (Eigen::Index j = 0; j < spec.sparsity; ++j) {
                w0(j) = (j % 2 == 0 ? 1.0 : -1.0) * spec.amplitude;
            }
            break;
        }
        case InstanceSpec::W0::dense: {
            for (Eigen::Index j = 0; j < p; ++j) w0(j) = normal(rng);
            const double norm = w0.norm();
            if (norm > 0.0) w0 *= spec.w0_norm / norm;
            break;
        }
    }
    return w0;
}

}  // namespace

DesignProblem generate(const InstanceSpec& spec, double* clipped_fraction) {
    if (spec.n <= 0 || (spec.p <= 0 && spec.design != InstanceSpec::Design::kernel)) {
        throw Error("generate: n and p must be positive");
    }

    auto design_rng = substream(spec.seed, 1);
    auto w0_rng = substream(spec.seed, 2);
    auto link_rng = substream(spec.seed, 3);

    DesignProblem problem;
    problem.X = build_design(spec, design_rng);

    if (spec.normalize) {
        const double n = static_cast<double>(problem.n());
        for (Eigen::Index j = 0; j < problem.p(); ++j) {
            const double ms = problem.X.col(j).squaredNorm() / n;
            if (ms > 0.0) problem.X.col(j) /= std::sqrt(ms);
        }
        problem.normalized = true;
    }

    int clipped = 0;
    if (spec.radius > 0.0) {
        for (Eigen::Index i = 0; i < problem.n(); ++i) {
            const double norm = problem.X.row(i).norm();
            if (norm > spec.radius) {
                problem.X.row(i) *= spec.radius / norm;
                ++clipped;
            }
        }
    }
    if (clipped_fraction) {
        *clipped_fraction = static_cast<double>(clipped) / problem.n();
    }
    problem.set_radius();

    problem.w0 = build_w0(spec, problem.p(), w0_rng);
    VectorXd prob(problem.n());
    for (Eigen::Index i = 0; i < problem.n(); ++i) {
        prob(i) = logistic::sigmoid(problem.w0->dot(problem.X.row(i)));
    }
    if (spec.misspecified) {
        for (Eigen::Index i = 0; i < problem.n(); ++i) {
            const double h = 2.0 * uniform01(link_rng) - 1.0;
            prob(i) = std::clamp(prob(i) + spec.delta_link * h, 0.01, 0.99);
        }
        problem.well_specified = false;
    } else {
        problem.well_specified = true;
    }
    problem.label_prob = prob;
    problem.validate();
    return problem;
}

EngineeredInstance engineer_kappa(double target_kappa, Eigen::Index n,
                                  Eigen::Index p, std::uint64_t seed) {
    if (!(target_kappa > 0.0 && target_kappa <= 1.0 / 16.0)) {
        throw Error("engineer_kappa: target must lie in (0, 1/16]");
    }

    InstanceSpec spec;
    spec.n = n;
    spec.p = p;
    spec.seed = seed;
    // clip row norms: the kappa floor (R/lambda^{1/2}) sqrt(b1) scales with
    // the radius, and unclipped Gaussian maxima grow like sqrt(log n)
    spec.radius = std::sqrt(static_cast<double>(p));
    DesignProblem base = generate(spec);  // w0 = 0, probs 1/2
    const double r = base.radius_R;

    // w0 direction: top eigenvector of the w0 = 0 weighted Gram matrix,
    // which keeps the bias concentrated on one known eigenvalue.
    const MatrixXd q0 = logistic::weighted_gram(base);
    const SymEig eig0(q0);
    const VectorXd dir = eig0.eigenvectors().col(p - 1);

    std::vector<double> scales{0.0};
    for (int i = 0; i <= 40; ++i) {
        scales.push_back(1e-4 * std::pow(10.0, i / 8.0));  // up to 10^1
    }
    std::vector<double> lambdas;
    for (int i = 0; i <= 90; ++i) {
        lambdas.push_back(r * r * 1e-6 * std::pow(10.0, i / 10.0));
    }

    double best_score = -1.0;  // d2 + n b2 of the best feasible candidate
    double best_scale = 0.0, best_lambda = 0.0;
    const double nd = static_cast<double>(n);

    for (double s : scales) {
        DesignProblem trial = base;
        trial.w0 = s * dir;
        VectorXd prob(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            prob(i) = logistic::sigmoid(trial.w0->dot(trial.X.row(i)));
        }
        trial.label_prob = prob;
        const SymEig eig(logistic::weighted_gram(trial));
        const VectorXd c = eig.eigenvectors().transpose() * *trial.w0;

        for (double lambda : lambdas) {
            double d1 = 0.0, d2 = 0.0, b1 = 0.0, b2 = 0.0;
            for (Eigen::Index k = 0; k < p; ++k) {
                const double m = std::max(eig.eigenvalues()(k), 0.0);
                const double c2 = c(k) * c(k);
                d1 += m / (m + lambda);
                d2 += m * m / ((m + lambda) * (m + lambda));
                b1 += lambda * lambda * c2 / (m + lambda);
                b2 += lambda * lambda * m * c2 / ((m + lambda) * (m + lambda));
            }
            const double denom = d2 / nd + b2;
            if (denom <= 0.0) continue;
            const double kappa =
                r / std::sqrt(lambda) * (d1 / nd + b1) / std::sqrt(denom);
            if (kappa < 0.8 * target_kappa || kappa > 1.2 * target_kappa) continue;
            const double score = d2 + nd * b2;
            if (score > best_score) {
                best_score = score;
                best_scale = s;
                best_lambda = lambda;
            }
        }
    }

    if (best_score < 0.0) {
        throw Error("engineer_kappa: target unreachable at this (n, p); try larger n");
    }

    EngineeredInstance out;
    out.problem = base;
    out.problem.w0 = best_scale * dir;
    VectorXd prob(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        prob(i) = logistic::sigmoid(out.problem.w0->dot(out.problem.X.row(i)));
    }
    out.problem.label_prob = prob;
    out.problem.well_specified = true;
    out.problem.validate();
    out.diag = ridge::diagnostics(out.problem, best_lambda);
    return out;
}

}  // namespace scordant::datagen
