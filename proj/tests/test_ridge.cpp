#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scordant/datagen.hpp"
#include "scordant/linalg.hpp"
#include "scordant/logistic.hpp"
#include "scordant/ridge.hpp"
#include "scordant/rng.hpp"

#include "helpers.hpp"

using namespace scordant;
using testutil::random_vector;

namespace {

logistic::DesignProblem generated(Eigen::Index n, Eigen::Index p,
                                  std::uint64_t seed, double w0_norm = 0.5) {
    datagen::InstanceSpec spec;
    spec.n = n;
    spec.p = p;
    spec.w0_kind = datagen::InstanceSpec::W0::dense;
    spec.w0_norm = w0_norm;
    spec.seed = seed;
    return datagen::generate(spec);
}

// scalar logistic-ridge score for the symmetric two-point instance; its root
// is the ridge minimizer
double symmetric_score(double w, double lambda) {
    return logistic::ell_d1(w) - 0.5 + lambda * w;
}

}  // namespace

TEST_CASE("fit_ridge: symmetric scalar instance matches bisection") {
    const auto problem = testutil::two_point_problem();
    const double lambda = 0.1;
    const auto fit = ridge::fit_ridge(problem, lambda);

    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (symmetric_score(mid, lambda) < 0.0 ? lo : hi) = mid;
    }
    CHECK(fit.w_hat(0) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
    CHECK(fit.w_hat(0) > 0.0);
}

TEST_CASE("fit_ridge: large-lambda shrinkage and the log 2 norm bound") {
    const auto problem = generated(60, 4, 1001);
    const VectorXd y = logistic::sample_labels(problem, 1002);
    const auto oracle = logistic::empirical_objective(problem, y);
    const double g0 = oracle.gradient(VectorXd::Zero(4)).norm();
    for (double lambda : {0.5, 5.0, 50.0, 500.0}) {
        const auto fit = ridge::fit_ridge(problem, y, lambda);
        CHECK(fit.w_hat.norm() <= g0 / lambda + 1e-9);
        CHECK(fit.w_hat.squaredNorm() <= 2.0 * std::log(2.0) / lambda + 1e-9);
        const VectorXd grad = oracle.gradient(fit.w_hat) + lambda * fit.w_hat;
        CHECK(grad.norm() <= 1e-7);
    }
}

TEST_CASE("diagnostics: isotropic closed form and w0 = 0 degeneracy") {
    // orthogonal design with probs 1/2 gives Q = I/4 exactly
    datagen::InstanceSpec spec;
    spec.n = 64;
    spec.p = 4;
    spec.design = datagen::InstanceSpec::Design::orthogonal;
    spec.seed = 1003;
    const auto problem = datagen::generate(spec);
    const double lambda = 0.3;
    const auto diag = ridge::diagnostics(problem, lambda);
    const double c = 0.25;
    CHECK(diag.d1 == doctest::Approx(4.0 * c / (c + lambda)).epsilon(1e-10));
    CHECK(diag.d2 ==
          doctest::Approx(4.0 * c * c / ((c + lambda) * (c + lambda)))
              .epsilon(1e-10));
    CHECK(diag.b1 == doctest::Approx(0.0));
    CHECK(diag.b2 == doctest::Approx(0.0));
    CHECK(diag.kappa >= 0.0);
}

TEST_CASE("diagnostics: inequality chain and kappa bounds on random instances") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto problem = generated(80, 5, 1100 + s);
        const double lambda =
            problem.radius_R * problem.radius_R * std::pow(10.0, -2.0 + 0.1 * s);
        const auto diag = ridge::diagnostics(problem, lambda);
        const double n = static_cast<double>(problem.n());
        const double r2 = problem.radius_R * problem.radius_R;

        CHECK(diag.d2 <= diag.d1 + 1e-12);
        CHECK(diag.d1 <= std::min(r2 / lambda, n) + 1e-9);
        CHECK(diag.b2 <= diag.b1 + 1e-12);
        CHECK(diag.b1 <=
              lambda * problem.w0->squaredNorm() * (1.0 + 1e-12) + 1e-15);
        if (std::isfinite(diag.b1_alt)) CHECK(diag.b1 <= diag.b1_alt + 1e-9);

        CHECK(diag.kappa + 1e-12 >=
              problem.radius_R / std::sqrt(lambda) *
                  std::sqrt(diag.d1 / n + diag.b1));
        CHECK(diag.kappa <= diag.kappa_bias + diag.kappa_var + 1e-12);

        // Appendix C chain: b2 + d2/n <= b1 + d1/n <= kappa^2 lambda / R^2
        CHECK(diag.b2 + diag.d2 / n <= diag.b1 + diag.d1 / n + 1e-12);
        CHECK(diag.b1 + diag.d1 / n <=
              diag.kappa * diag.kappa * lambda / r2 + 1e-9);
    }
}

TEST_CASE("diagnostics: logistic d1 below the quarter-scaled least-squares d1") {
    const auto problem = generated(60, 4, 1200);
    const MatrixXd g =
        problem.X.transpose() * problem.X / static_cast<double>(problem.n());
    for (double lambda : {0.01, 0.1, 1.0}) {
        const auto diag = ridge::diagnostics(problem, lambda);
        const SymEig eig(0.25 * g);
        double ls_d1 = 0.0;
        for (Eigen::Index k = 0; k < 4; ++k) {
            const double m = std::max(eig.eigenvalues()(k), 0.0);
            ls_d1 += m / (m + lambda);
        }
        CHECK(diag.d1 <= ls_d1 + 1e-9);
    }
}

TEST_CASE("diagnostics: kappa = 0 in the R -> 0 square-loss analogue") {
    // the R factor multiplies the whole of Eq. 11, so R = 0 forces kappa = 0
    logistic::DesignProblem problem;
    problem.X = MatrixXd::Zero(10, 3);
    problem.w0 = VectorXd::Ones(3);
    problem.label_prob = VectorXd::Constant(10, 0.5);
    problem.well_specified = true;
    problem.set_radius();
    CHECK(problem.radius_R == 0.0);
    const auto diag = ridge::diagnostics(problem, 0.1);
    CHECK(diag.kappa == 0.0);
    CHECK(diag.kappa_bias == 0.0);
    CHECK(diag.kappa_var == 0.0);
}

TEST_CASE("theorem1_check: lambda formula and desk-scale acceptance") {
    datagen::InstanceSpec spec;
    spec.n = 200;
    spec.p = 5;
    spec.w0_kind = datagen::InstanceSpec::W0::dense;
    spec.w0_norm = 1.0;
    spec.misspecified = true;
    spec.delta_link = 0.2;
    spec.seed = 1301;
    const auto problem = datagen::generate(spec);

    const auto res = ridge::theorem1_check(problem, 0.5, 500, 1302);
    const double r2 = problem.radius_R * problem.radius_R;
    CHECK(res.lambda ==
          doctest::Approx(19.0 * r2 * std::sqrt(std::log(16.0) / 200.0))
              .epsilon(1e-12));
    CHECK(res.violation_rate <= 0.55);
    CHECK(res.pass);

    // delta -> 1: lambda -> 19 R^2 sqrt(log 8 / n)
    const auto res_d1 = ridge::theorem1_check(problem, 1.0 - 1e-12, 1, 1303);
    CHECK(res_d1.lambda ==
          doctest::Approx(19.0 * r2 * std::sqrt(std::log(8.0) / 200.0))
              .epsilon(1e-6));
}

TEST_CASE("theorem2_check: premises enforced, v = 0 vacuous") {
    const auto problem = generated(500, 4, 1401, 1.0);
    CHECK_THROWS_AS(ridge::theorem2_check(problem, 1e-6, 0.1, 5, 1),
                    PremiseError);  // tiny lambda drives kappa > 1/16
    const auto diag = ridge::diagnostics(problem, 1.0);
    CHECK_THROWS_AS(ridge::theorem2_check(problem, 1.0, 0.3, 5, 1),
                    PremiseError);  // v > 1/4

    if (diag.kappa <= 1.0 / 16.0) {
        const auto res = ridge::theorem2_check(problem, 1.0, 0.0, 20, 1402);
        CHECK(res.empirical_freq == doctest::Approx(1.0));
        CHECK(res.freq_floor <= 0.0 + 1e-12);
        CHECK(res.pass);
    }
}

TEST_CASE("prop3_check: degenerate zero instance and refusal") {
    auto problem = generated(50, 3, 1501, 0.0);
    // labels drawn with probability exactly 1/2 and eps manually zeroed:
    // use +1/-1 paired rows so q = 0
    logistic::DesignProblem paired;
    paired.X.resize(4, 2);
    paired.X << 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0;
    paired.w0 = VectorXd::Zero(2);
    paired.label_prob = VectorXd::Constant(4, 0.5);
    paired.well_specified = true;
    paired.set_radius();
    VectorXd y(4);
    y << 1.0, -1.0, 1.0, -1.0;  // eps cancels pairwise, q = 0
    const auto res = ridge::prop3_check(paired, 0.2, y);
    CHECK(res.nu2 <= 1e-18);
    CHECK(res.lhs <= 1e-12);
    CHECK(res.rhs <= 1e-12);
    CHECK(res.holds);

    // w0 far from the minimizer with tiny lambda: premise refused
    auto far = generated(30, 3, 1502, 3.0);
    const VectorXd yf = logistic::sample_labels(far, 1503);
    CHECK_THROWS_AS(ridge::prop3_check(far, 1e-8, yf), PremiseError);
}

TEST_CASE("prop3_check: 500 premise-holding replicates all hold") {
    const auto problem = generated(400, 4, 1601, 0.05);
    int held = 0, premise_ok = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, 1602, rep);
        try {
            const auto res = ridge::prop3_check(problem, 1.0, y);
            ++premise_ok;
            if (res.holds) ++held;
        } catch (const PremiseError&) {
        }
    }
    CHECK(premise_ok >= 400);
    CHECK(held == premise_ok);
}

TEST_CASE("mallows_criterion: large-lambda limit and permutation invariance") {
    const auto problem = generated(60, 4, 1701);
    const VectorXd y = logistic::sample_labels(problem, 1702);
    const double crit = ridge::mallows_criterion(problem, 1e8, y);
    CHECK(crit == doctest::Approx(std::log(2.0)).epsilon(1e-6));

    auto permuted = problem;
    VectorXd y_perm(problem.n());
    for (Eigen::Index i = 0; i < problem.n(); ++i) {
        const Eigen::Index src = problem.n() - 1 - i;
        permuted.X.row(i) = problem.X.row(src);
        y_perm(i) = y(src);
    }
    CHECK(ridge::mallows_criterion(problem, 0.3, y) ==
          doctest::Approx(ridge::mallows_criterion(permuted, 0.3, y_perm))
              .epsilon(1e-10));
}

TEST_CASE("mallows_criterion: grid minimizer tracks the J0 minimizer") {
    datagen::InstanceSpec spec;
    spec.n = 3000;
    spec.p = 4;
    spec.w0_kind = datagen::InstanceSpec::W0::dense;
    spec.w0_norm = 0.3;
    spec.seed = 1801;
    const auto problem = datagen::generate(spec);
    const auto j0 = logistic::population_objective(problem);
    const VectorXd y = logistic::sample_labels(problem, 1802);

    const auto grid = ridge::lambda_grid(problem.radius_R, 1e-3, 1.0, 4);
    int best_crit = -1, best_risk = -1;
    double min_crit = 1e300, min_risk = 1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double crit = ridge::mallows_criterion(problem, grid[i], y);
        const double risk =
            j0.value(ridge::fit_ridge(problem, y, grid[i]).w_hat);
        if (crit < min_crit) { min_crit = crit; best_crit = static_cast<int>(i); }
        if (risk < min_risk) { min_risk = risk; best_risk = static_cast<int>(i); }
    }
    CHECK(std::abs(best_crit - best_risk) <= 1);
}

TEST_CASE("rkhs_reduce: linear kernel reproduces the direct fit") {
    const auto problem = generated(40, 3, 1901);
    const VectorXd y = logistic::sample_labels(problem, 1902);
    const MatrixXd k = problem.X * problem.X.transpose();
    const double lambda = 0.2;
    const auto red = ridge::rkhs_reduce(k, y, lambda);

    const auto direct = ridge::fit_ridge(problem, y, lambda);
    const VectorXd direct_fitted = problem.X * direct.w_hat;
    CHECK((red.fitted - direct_fitted).norm() <=
          1e-6 * (1.0 + direct_fitted.norm()));
    CHECK((red.T * red.T.transpose() - k).norm() <= 1e-8 * k.trace());
    CHECK((k * red.alpha - red.fitted).norm() <=
          1e-6 * (1.0 + red.fitted.norm()));
}

TEST_CASE("rkhs_reduce: identity kernel decouples into scalar problems") {
    const Eigen::Index n = 12;
    auto rng = substream(2001, 0);
    VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i) = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    }
    const double lambda = 0.4;
    const auto red = ridge::rkhs_reduce(MatrixXd::Identity(n, n), y, lambda);
    for (Eigen::Index i = 0; i < n; ++i) {
        // scalar problem: minimize (1/n)(ell(f) - y f/2) + (lambda/2) f^2
        double lo = -20.0, hi = 20.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double score = (logistic::ell_d1(mid) - y(i) / 2.0) /
                                     static_cast<double>(n) +
                                 lambda * mid;
            (score < 0.0 ? lo : hi) = mid;
        }
        CHECK(red.fitted(i) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
    }

    const auto shrunk = ridge::rkhs_reduce(MatrixXd::Identity(n, n), y, 1e9);
    CHECK(shrunk.fitted.norm() <= 1e-6);
}

TEST_CASE("rkhs_reduce: non-PSD kernel refused") {
    MatrixXd k = MatrixXd::Identity(3, 3);
    k(2, 2) = -1.0;
    CHECK_THROWS_AS(ridge::rkhs_reduce(k, VectorXd::Ones(3), 0.1), Error);
}

TEST_CASE("theorem2 center matches the replicate mean on a small-kappa instance") {
    const auto eng = datagen::engineer_kappa(0.01, 4000, 4, 2101);
    const auto& problem = eng.problem;
    const double lambda = eng.diag.lambda;
    const auto j0 = logistic::population_objective(problem);
    const double n = static_cast<double>(problem.n());

    const int reps = 60;
    double mean = 0.0, m2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, 2102, rep);
        const double risk = j0.value(ridge::fit_ridge(problem, y, lambda).w_hat);
        const double delta = risk - mean;
        mean += delta / (rep + 1);
        m2 += delta * (risk - mean);
    }
    const double se = std::sqrt(m2 / (reps - 1.0) / reps);
    const double center =
        j0.value(*problem.w0) + 0.5 * (eng.diag.b2 + eng.diag.d2 / n);
    CHECK(std::abs(mean - center) <= 3.0 * se + 1e-12);
}
