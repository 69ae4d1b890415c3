#include "scordant/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "scordant/linalg.hpp"
#include "scordant/rng.hpp"

namespace scordant::lasso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSignZero = 1e-10;  // |w_j| below this counts as exactly 0

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double penalized_value(const VectorXd& x_times_w, const VectorXd& c) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x_times_w.size(); ++i) {
        acc += logistic::ell(x_times_w(i)) - c(i) * x_times_w(i);
    }
    return acc / static_cast<double>(x_times_w.size());
}

double kkt_residual(const VectorXd& g, const VectorXd& w, double lambda) {
    double res = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        const double r = std::abs(w(j)) <= kSignZero
                             ? std::max(0.0, std::abs(g(j)) - lambda)
                             : std::abs(g(j) + lambda * (w(j) > 0.0 ? 1.0 : -1.0));
        res = std::max(res, r);
    }
    return res;
}

}  // namespace

LassoFit fit_lasso(const DesignProblem& problem, double lambda) {
    if (!problem.labels) throw Error("fit_lasso: labels missing");
    return fit_lasso(problem, *problem.labels, lambda);
}

LassoFit fit_lasso(const DesignProblem& problem, const VectorXd& labels,
                   double lambda) {
    if (!(lambda > 0.0)) throw Error("fit_lasso: lambda must be positive");
    const MatrixXd& x = problem.X;
    const double n = static_cast<double>(problem.n());
    const Eigen::Index p = problem.p();
    const VectorXd c = 0.5 * labels;

    LassoFit fit;
    VectorXd w = VectorXd::Zero(p);
    VectorXd t = VectorXd::Zero(problem.n());  // X w, maintained incrementally
    VectorXd work(problem.n());

    constexpr int kMaxOuter = 200;
    double best_residual = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int outer = 0; outer < kMaxOuter; ++outer) {
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            work(i) = logistic::ell_d1(t(i)) - c(i);
        }
        const VectorXd g = x.transpose() * work / n;
        fit.kkt_residual = kkt_residual(g, w, lambda);
        fit.iterations = outer;
        if (fit.kkt_residual <= 1e-9) {
            fit.w_hat = w;
            return fit;
        }
        // at large n the gradient's summation noise can floor the residual
        // just above the target; stop once progress has ceased and let the
        // 1e-8 contract check below decide
        if (fit.kkt_residual > 0.5 * best_residual) {
            if (++stalled >= 5) break;
        } else {
            stalled = 0;
        }
        best_residual = std::min(best_residual, fit.kkt_residual);

        for (Eigen::Index i = 0; i < t.size(); ++i) {
            work(i) = logistic::ell_d2(t(i));
        }
        MatrixXd h = x.transpose() * work.asDiagonal() * x / n;
        h.diagonal().array() += 1e-12 * trace_scale(h);

        // inner coordinate descent on the penalized quadratic model
        // g'(z-w) + 1/2 (z-w)'H(z-w) + lambda ||z||_1
        VectorXd z = w;
        VectorXd r = VectorXd::Zero(p);  // H (z - w)
        for (int pass = 0; pass < 1000; ++pass) {
            double delta_max = 0.0;
            for (Eigen::Index j = 0; j < p; ++j) {
                const double hjj = h(j, j);
                const double zj =
                    soft_threshold(hjj * z(j) - (g(j) + r(j)), lambda) / hjj;
                const double dz = zj - z(j);
                if (dz != 0.0) {
                    r += dz * h.col(j);
                    z(j) = zj;
                    delta_max = std::max(delta_max, std::abs(dz));
                }
            }
            if (delta_max <= 1e-13 * (1.0 + z.lpNorm<1>())) break;
        }

        const VectorXd d = z - w;
        if (d.lpNorm<Eigen::Infinity>() == 0.0) break;

        const double value0 = penalized_value(t, c) + lambda * w.lpNorm<1>();
        const double decrease =
            g.dot(d) + lambda * (z.lpNorm<1>() - w.lpNorm<1>());
        const VectorXd xd = x * d;

        // decrease <= -d'Hd for the model step, so a predicted decrease at
        // the level of evaluation noise certifies a tiny step in the Hessian
        // metric; take it whole -- a line search on noise would stall. The
        // averaged objective carries summation noise that grows with n, so
        // the floor must scale with it.
        const double noise_floor =
            (1e-12 + 2.0 * std::numeric_limits<double>::epsilon() * n) *
            (std::abs(value0) + 1.0);
        if (decrease > -noise_floor) {
            w += d;
            t += xd;
            continue;
        }
        double alpha = 1.0;
        int backtracks = 0;
        while (penalized_value(t + alpha * xd, c) +
                   lambda * (w + alpha * d).lpNorm<1>() >
               value0 + 1e-4 * alpha * decrease) {
            alpha *= 0.5;
            if (++backtracks > 60) {
                throw ConvergenceError("fit_lasso: line search failed");
            }
        }
        w += alpha * d;
        t += alpha * xd;
    }

    // a last-chance exact check: the loop may exit with a stationary model
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        work(i) = logistic::ell_d1(t(i)) - c(i);
    }
    fit.kkt_residual = kkt_residual(x.transpose() * work / n, w, lambda);
    if (fit.kkt_residual > 1e-8) {
        throw ConvergenceError("fit_lasso: KKT residual above tolerance");
    }
    fit.w_hat = w;
    return fit;
}

namespace {

// Stationary points of x'Ax / x'Bx for symmetric A and PSD (possibly
// singular) B: eigendecompose B, eliminate its null-space block against A
// by a Schur complement (valid for PSD A restricted there), and solve the
// reduced symmetric eigenproblem. Returns (ratio, x) pairs.
std::vector<std::pair<double, VectorXd>> rayleigh_stationary(const MatrixXd& a,
                                                             const MatrixXd& b) {
    std::vector<std::pair<double, VectorXd>> out;
    const Eigen::Index m = a.rows();
    if (m == 0) return out;
    const SymEig beig(b);
    const double tol_b = 1e-12 * std::max(std::abs(b.trace()), 1.0);

    std::vector<Eigen::Index> pos, nul;
    for (Eigen::Index k = 0; k < m; ++k) {
        (beig.eigenvalues()(k) > tol_b ? pos : nul).push_back(k);
    }
    if (pos.empty()) return out;

    MatrixXd up(m, static_cast<Eigen::Index>(pos.size()));
    MatrixXd un(m, static_cast<Eigen::Index>(nul.size()));
    VectorXd beta(static_cast<Eigen::Index>(pos.size()));
    for (std::size_t k = 0; k < pos.size(); ++k) {
        up.col(k) = beig.eigenvectors().col(pos[k]);
        beta(k) = beig.eigenvalues()(pos[k]);
    }
    for (std::size_t k = 0; k < nul.size(); ++k) {
        un.col(k) = beig.eigenvectors().col(nul[k]);
    }

    const MatrixXd app = up.transpose() * a * up;
    MatrixXd s = app;
    MatrixXd coupling;  // maps the positive block to the optimal null part
    if (!nul.empty()) {
        const MatrixXd ann = un.transpose() * a * un;
        const MatrixXd apn = up.transpose() * a * un;
        const MatrixXd ann_pinv = SymEig(ann).pinv(1e-12 * trace_scale(ann));
        s -= apn * ann_pinv * apn.transpose();
        coupling = -ann_pinv * apn.transpose();
    }

    const VectorXd binv_sqrt = beta.cwiseSqrt().cwiseInverse();
    const MatrixXd reduced =
        binv_sqrt.asDiagonal() * s * binv_sqrt.asDiagonal();
    const SymEig eig(reduced);
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const VectorXd xp = binv_sqrt.asDiagonal() * eig.eigenvectors().col(k);
        VectorXd x = up * xp;
        if (!nul.empty()) x += un * (coupling * xp);
        out.emplace_back(eig.eigenvalues()(k), std::move(x));
    }
    return out;
}

struct ConeGeometry {
    std::vector<bool> in_k;
    double feas_tol = 1e-9;

    bool feasible(const VectorXd& delta) const {
        double on = 0.0, off = 0.0;
        for (Eigen::Index j = 0; j < delta.size(); ++j) {
            (in_k[j] ? on : off) += std::abs(delta(j));
        }
        return off <= 3.0 * on + feas_tol * (on + off + 1.0);
    }

    double ratio(const MatrixXd& q, const VectorXd& delta) const {
        double on2 = 0.0;
        for (Eigen::Index j = 0; j < delta.size(); ++j) {
            if (in_k[j]) on2 += delta(j) * delta(j);
        }
        if (on2 <= 0.0) return kInf;
        return std::max(delta.dot(q * delta), 0.0) / on2;
    }
};

// Exact rho^2 by enumerating the faces of the cone: for every support
// subset A, stationary points with the l1 budget inactive are generalized
// eigenvectors of (Q_AA, I_{A cap K}) via a Schur complement on A \ K;
// budget-active points are handled per sign pattern on the facet's
// hyperplane. Cost is O(3^p) small eigenproblems.
double exact_re2(const MatrixXd& q, const ConeGeometry& cone) {
    const int p = static_cast<int>(q.rows());
    double best = kInf;

    for (unsigned mask = 1; mask < (1u << p); ++mask) {
        std::vector<Eigen::Index> aset, on, off;  // A, A cap K, A \ K
        for (int j = 0; j < p; ++j) {
            if (!(mask & (1u << j))) continue;
            aset.push_back(j);
            (cone.in_k[j] ? on : off).push_back(j);
        }
        if (on.empty()) continue;
        const auto na = static_cast<Eigen::Index>(aset.size());

        MatrixXd qaa(na, na);
        for (Eigen::Index r = 0; r < na; ++r) {
            for (Eigen::Index c = 0; c < na; ++c) qaa(r, c) = q(aset[r], aset[c]);
        }

        // (i) budget inactive: eliminate the A \ K block
        {
            const auto non = static_cast<Eigen::Index>(on.size());
            MatrixXd s(non, non), qad(non, na - non), qdd(na - non, na - non);
            std::vector<Eigen::Index> local_on, local_off;
            for (Eigen::Index r = 0; r < na; ++r) {
                (cone.in_k[aset[r]] ? local_on : local_off).push_back(r);
            }
            for (Eigen::Index r = 0; r < non; ++r) {
                for (Eigen::Index c = 0; c < non; ++c) {
                    s(r, c) = qaa(local_on[r], local_on[c]);
                }
                for (Eigen::Index c = 0; c < na - non; ++c) {
                    qad(r, c) = qaa(local_on[r], local_off[c]);
                }
            }
            MatrixXd recover;  // x_d = recover * x_a
            if (na > non) {
                for (Eigen::Index r = 0; r < na - non; ++r) {
                    for (Eigen::Index c = 0; c < na - non; ++c) {
                        qdd(r, c) = qaa(local_off[r], local_off[c]);
                    }
                }
                const MatrixXd qdd_pinv = SymEig(qdd).pinv(1e-12 * trace_scale(qdd));
                recover = -qdd_pinv * qad.transpose();
                s -= qad * qdd_pinv * qad.transpose();
            }
            const SymEig eig(s);
            for (Eigen::Index k = 0; k < non; ++k) {
                const double theta = std::max(eig.eigenvalues()(k), 0.0);
                if (theta >= best) continue;
                VectorXd delta = VectorXd::Zero(p);
                const VectorXd xa = eig.eigenvectors().col(k);
                for (Eigen::Index r = 0; r < non; ++r) delta(on[r]) = xa(r);
                if (na > non) {
                    const VectorXd xd = recover * xa;
                    for (Eigen::Index r = 0; r < na - non; ++r) {
                        delta(off[r]) = xd(r);
                    }
                }
                if (cone.feasible(delta)) best = theta;
            }
        }

        // (ii) budget active: restrict to the facet hyperplane per sign
        // pattern (global flip fixed by pinning the first K coordinate)
        if (na < 2) continue;
        MatrixXd eaa = MatrixXd::Zero(na, na);
        for (Eigen::Index r = 0; r < na; ++r) {
            if (cone.in_k[aset[r]]) eaa(r, r) = 1.0;
        }
        const auto n_patterns = 1u << (na - 1);
        for (unsigned pat = 0; pat < n_patterns; ++pat) {
            VectorXd sigma(na), c_vec(na);
            for (Eigen::Index r = 0; r < na; ++r) {
                sigma(r) = (r > 0 && (pat & (1u << (r - 1)))) ? -1.0 : 1.0;
                c_vec(r) = cone.in_k[aset[r]] ? -3.0 * sigma(r) : sigma(r);
            }
            // orthonormal basis of the hyperplane c'x = 0
            const Eigen::HouseholderQR<MatrixXd> qr(c_vec);
            const MatrixXd z =
                qr.householderQ() * MatrixXd::Identity(na, na).rightCols(na - 1);
            const auto candidates =
                rayleigh_stationary(z.transpose() * qaa * z,
                                    z.transpose() * eaa * z);
            for (const auto& [theta, y] : candidates) {
                const double t = std::max(theta, 0.0);
                if (t >= best) continue;
                const VectorXd xa = z * y;
                const double scale = xa.lpNorm<Eigen::Infinity>();
                if (scale <= 0.0) continue;
                bool ok_pos = true, ok_neg = true;
                for (Eigen::Index r = 0; r < na; ++r) {
                    const double v = sigma(r) * xa(r) / scale;
                    if (v < -1e-9) ok_pos = false;
                    if (v > 1e-9) ok_neg = false;
                }
                if (!ok_pos && !ok_neg) continue;
                VectorXd delta = VectorXd::Zero(p);
                for (Eigen::Index r = 0; r < na; ++r) delta(aset[r]) = xa(r);
                if (cone.ratio(q, delta) < kInf) best = t;
            }
        }
    }
    return best;
}

// Random feasible directions plus projected-gradient refinement; yields an
// upper bound on rho^2.
double sampled_re2(const MatrixXd& q, const ConeGeometry& cone,
                   int n_directions, std::uint64_t seed) {
    const Eigen::Index p = q.rows();
    double best = kInf;

    const auto project = [&](VectorXd& delta) {
        double on = 0.0, off = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            (cone.in_k[j] ? on : off) += std::abs(delta(j));
        }
        if (off > 3.0 * on && off > 0.0) {
            const double scale = 3.0 * on / off;
            for (Eigen::Index j = 0; j < p; ++j) {
                if (!cone.in_k[j]) delta(j) *= scale;
            }
        }
    };

    for (int i = 0; i < n_directions; ++i) {
        auto rng = substream(seed, static_cast<std::uint64_t>(i));
        VectorXd delta(p);
        for (Eigen::Index j = 0; j < p; ++j) delta(j) = normal(rng);
        project(delta);
        double f = cone.ratio(q, delta);

        for (int it = 0; it < 50 && std::isfinite(f); ++it) {
            double on2 = 0.0;
            for (Eigen::Index j = 0; j < p; ++j) {
                if (cone.in_k[j]) on2 += delta(j) * delta(j);
            }
            VectorXd grad = 2.0 * (q * delta);
            for (Eigen::Index j = 0; j < p; ++j) {
                if (cone.in_k[j]) grad(j) -= 2.0 * f * delta(j);
            }
            grad /= on2;
            double step = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 25; ++bt) {
                VectorXd trial = delta - step * grad;
                project(trial);
                const double ft = cone.ratio(q, trial);
                if (ft < f - 1e-14) {
                    delta = trial;
                    f = ft;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        best = std::min(best, f);
    }
    return best;
}

}  // namespace

RestrictedEigenvalue restricted_eigenvalue(const MatrixXd& q,
                                           const std::vector<Eigen::Index>& k,
                                           int n_directions, std::uint64_t seed,
                                           int max_exact_p) {
    if (k.empty()) throw Error("restricted_eigenvalue: K must be nonempty");
    ConeGeometry cone;
    cone.in_k.assign(q.rows(), false);
    for (Eigen::Index j : k) cone.in_k[j] = true;

    RestrictedEigenvalue out;
    out.exact = q.rows() <= max_exact_p;
    const double re2 = out.exact ? exact_re2(q, cone)
                                 : sampled_re2(q, cone, n_directions, seed);
    out.rho = std::sqrt(std::max(re2, 0.0));
    return out;
}

LassoDiagnostics consistency_diagnostics(const DesignProblem& problem,
                                         std::uint64_t re_seed) {
    if (!problem.w0) throw Error("consistency_diagnostics: w0 missing");
    LassoDiagnostics d;
    d.Q = logistic::weighted_gram(problem);
    const VectorXd& w0 = *problem.w0;

    d.signs = VectorXd::Zero(problem.p());
    d.mu = kInf;
    for (Eigen::Index j = 0; j < problem.p(); ++j) {
        if (w0(j) != 0.0) {
            d.support.push_back(j);
            d.signs(j) = w0(j) > 0.0 ? 1.0 : -1.0;
            d.mu = std::min(d.mu, std::abs(w0(j)));
        }
    }
    if (d.support.empty()) {
        d.degenerate = true;
        d.mu = 0.0;
        return d;
    }

    const auto nk = static_cast<Eigen::Index>(d.support.size());
    MatrixXd qkk(nk, nk);
    VectorXd sk(nk);
    for (Eigen::Index r = 0; r < nk; ++r) {
        sk(r) = d.signs(d.support[r]);
        for (Eigen::Index c = 0; c < nk; ++c) {
            qkk(r, c) = d.Q(d.support[r], d.support[c]);
        }
    }
    const SymEig eig(qkk);
    d.rho_min = eig.min_eigenvalue();
    if (d.rho_min <= 1e-12 * trace_scale(qkk)) {
        throw SingularHessianError("consistency_diagnostics: Q_KK singular",
                                   d.rho_min);
    }
    const VectorXd qkk_inv_sk = qkk.llt().solve(sk);

    double worst = 0.0;
    for (Eigen::Index j = 0; j < problem.p(); ++j) {
        if (d.signs(j) != 0.0) continue;
        double dot = 0.0;
        for (Eigen::Index r = 0; r < nk; ++r) {
            dot += d.Q(j, d.support[r]) * qkk_inv_sk(r);
        }
        worst = std::max(worst, std::abs(dot));
    }
    d.eta = 1.0 - worst;

    d.re = restricted_eigenvalue(d.Q, d.support, 2000, re_seed);

    const double kcard = static_cast<double>(nk);
    const double r = problem.radius_R;
    d.cap_mu = d.rho_min * d.mu / (4.0 * std::sqrt(kcard));
    d.cap_eta = d.eta * std::pow(d.rho_min, 1.5) / (64.0 * r * kcard);
    d.cap_efficiency = d.re.rho * d.re.rho / (48.0 * r * kcard);

    double r_k = 0.0;
    for (Eigen::Index i = 0; i < problem.n(); ++i) {
        double s2 = 0.0;
        for (Eigen::Index j : d.support) s2 += problem.X(i, j) * problem.X(i, j);
        r_k = std::max(r_k, s2);
    }
    d.radius_on_support = std::sqrt(r_k);
    return d;
}

namespace {

bool signs_match(const VectorXd& w, const VectorXd& s) {
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        const double sj = std::abs(w(j)) <= kSignZero ? 0.0
                          : w(j) > 0.0                ? 1.0
                                                      : -1.0;
        if (sj != s(j)) return false;
    }
    return true;
}

}  // namespace

Theorem4Result theorem4_check(const DesignProblem& problem, double lambda,
                              int n_reps, std::uint64_t seed) {
    Theorem4Result out;
    out.diag = consistency_diagnostics(problem, seed);
    out.lambda = lambda;
    out.n_reps = n_reps;
    const LassoDiagnostics& d = out.diag;
    if (d.degenerate || !(d.eta > 0.0) || !(d.rho_min > 0.0) || !(d.mu > 0.0)) {
        throw PremiseError("theorem4: needs eta, rho, mu > 0");
    }
    if (lambda > std::min(d.cap_mu, d.cap_eta)) {
        throw PremiseError("theorem4: lambda above its caps");
    }

    const double n = static_cast<double>(problem.n());
    const double p = static_cast<double>(problem.p());
    const double kcard = static_cast<double>(d.support.size());
    const double rho = d.rho_min;
    out.bound_eq13 =
        2.0 * p * std::exp(-n * lambda * lambda * d.eta * d.eta / 16.0) +
        2.0 * kcard * std::exp(-n * rho * rho * d.mu * d.mu / (16.0 * kcard)) +
        2.0 * kcard *
            std::exp(-lambda * n * std::pow(rho, 1.5) * d.eta /
                     (64.0 * problem.radius_R * kcard));
    out.vacuous = out.bound_eq13 >= 1.0;

    int errors = 0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, seed, rep);
        if (!signs_match(fit_lasso(problem, y, lambda).w_hat, d.signs)) ++errors;
    }
    out.sign_error_rate = static_cast<double>(errors) / n_reps;
    const double proxy = std::min(out.bound_eq13, 1.0);
    out.rate_ceiling =
        out.bound_eq13 + 3.0 * std::sqrt(proxy / static_cast<double>(n_reps));
    out.pass = out.vacuous || out.sign_error_rate <= out.rate_ceiling;
    return out;
}

Theorem5Result theorem5_check(const DesignProblem& problem, double lambda,
                              int n_reps, std::uint64_t seed) {
    if (!problem.normalized || !problem.well_specified) {
        throw PremiseError("theorem5: requires (A3) and (A4)");
    }
    const LassoDiagnostics d = consistency_diagnostics(problem, seed);
    if (d.degenerate || !(d.re.rho > 0.0)) {
        throw PremiseError("theorem5: restricted eigenvalue must be positive");
    }
    if (lambda > d.cap_efficiency) {
        throw PremiseError("theorem5: lambda > rho^2 / (48 R |K|)");
    }

    Theorem5Result out;
    out.lambda = lambda;
    out.rho = d.re.rho;
    out.n_reps = n_reps;
    const double kcard = static_cast<double>(d.support.size());
    const double rho2 = out.rho * out.rho;
    out.l1_bound = 12.0 * lambda * kcard / rho2;
    out.risk_bound = 12.0 * lambda * lambda * kcard / rho2;

    const ScfnOracle j0 = logistic::population_objective(problem);
    const double risk0 = j0.value(*problem.w0);

    int l1_bad = 0, risk_bad = 0, joint_ok = 0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, seed, rep);
        const VectorXd w = fit_lasso(problem, y, lambda).w_hat;
        const bool l1_ok = (w - *problem.w0).lpNorm<1>() <= out.l1_bound;
        const bool risk_ok = j0.value(w) - risk0 <= out.risk_bound;
        if (!l1_ok) ++l1_bad;
        if (!risk_ok) ++risk_bad;
        if (l1_ok && risk_ok) ++joint_ok;
    }
    out.l1_violation_rate = static_cast<double>(l1_bad) / n_reps;
    out.risk_violation_rate = static_cast<double>(risk_bad) / n_reps;
    out.joint_holding_freq = static_cast<double>(joint_ok) / n_reps;

    const double n = static_cast<double>(problem.n());
    const double p = static_cast<double>(problem.p());
    out.prob_floor_literal = 1.0 - 2.0 * p * std::exp(-lambda * n * n / 5.0);
    out.prob_floor_alternative = 1.0 - 2.0 * p * std::exp(-lambda * lambda * n / 5.0);

    const double floor = std::clamp(out.prob_floor_literal, 0.0, 1.0);
    const double fail_proxy = std::min(1.0 - floor + 1e-12, 1.0);
    out.pass = out.joint_holding_freq >=
               floor - 3.0 * std::sqrt(fail_proxy / static_cast<double>(n_reps));
    return out;
}

}  // namespace scordant::lasso
