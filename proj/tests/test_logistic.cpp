#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scordant/logistic.hpp"
#include "scordant/rng.hpp"

#include "helpers.hpp"

using namespace scordant;
using testutil::random_vector;

TEST_CASE("ell and derivatives at the symmetric point") {
    CHECK(logistic::ell(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(logistic::ell_d1(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(logistic::ell_d2(0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(logistic::ell_d3(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("ell: evenness, |ell'''| <= ell'', saturation at u = 50") {
    for (int i = -200; i <= 200; ++i) {
        const double u = 0.25 * i;
        CHECK(logistic::ell(u) == doctest::Approx(logistic::ell(-u)).epsilon(1e-14));
        CHECK(std::abs(logistic::ell_d3(u)) <=
              logistic::ell_d2(u) * (1.0 + 1e-12));
    }
    // ell(50) = 25 + log1p(e^{-50}); ell''(50) = e^{-50}(1 + e^{-50})^{-2}
    CHECK(logistic::ell(50.0) ==
          doctest::Approx(25.0 + std::log1p(std::exp(-50.0))).epsilon(1e-15));
    CHECK(logistic::ell_d2(50.0) ==
          doctest::Approx(std::exp(-50.0) /
                          ((1.0 + std::exp(-50.0)) * (1.0 + std::exp(-50.0))))
              .epsilon(1e-12));
    CHECK(std::isfinite(logistic::ell(800.0)));
    CHECK(logistic::ell(800.0) == doctest::Approx(400.0).epsilon(1e-12));
}

TEST_CASE("empirical objective: two-point hand values and log 2 at zero") {
    const auto problem = testutil::two_point_problem();
    const auto oracle = logistic::empirical_objective(problem);
    const VectorXd zero = VectorXd::Zero(1);
    CHECK(oracle.value(zero) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(oracle.gradient(zero)(0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(oracle.hessian(zero)(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(oracle.r_constant == doctest::Approx(1.0));

    const auto other = testutil::random_problem(30, 4, 21);
    const auto o2 = logistic::empirical_objective(other);
    CHECK(o2.value(VectorXd::Zero(4)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("empirical objective matches finite differences on 100 instances") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto problem = testutil::random_problem(12, 3, 100 + s);
        const auto oracle = logistic::empirical_objective(problem);
        auto rng = substream(200 + s, 0);
        const VectorXd w = random_vector(3, rng);
        CHECK((oracle.gradient(w) - testutil::fd_gradient(oracle, w)).norm() <=
              1e-5 * (1.0 + oracle.gradient(w).norm()));
        CHECK((oracle.hessian(w) - testutil::fd_hessian(oracle, w)).norm() <=
              1e-5 * (1.0 + oracle.hessian(w).norm()));
    }
}

TEST_CASE("empirical Hessian equals the explicit weighted sum") {
    const auto problem = testutil::random_problem(25, 3, 31);
    const auto oracle = logistic::empirical_objective(problem);
    auto rng = substream(32, 0);
    const VectorXd w = random_vector(3, rng);
    MatrixXd expected = MatrixXd::Zero(3, 3);
    for (Eigen::Index i = 0; i < problem.n(); ++i) {
        const VectorXd xi = problem.X.row(i);
        expected += logistic::ell_d2(w.dot(xi)) * xi * xi.transpose();
    }
    expected /= static_cast<double>(problem.n());
    CHECK((oracle.hessian(w) - expected).norm() <= 1e-12 * (1.0 + expected.norm()));
}

namespace {

logistic::DesignProblem well_specified_problem(Eigen::Index n, Eigen::Index p,
                                               std::uint64_t seed) {
    auto problem = testutil::random_problem(n, p, seed);
    auto rng = substream(seed, 5);
    problem.w0 = random_vector(p, rng, 0.5);
    VectorXd prob(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        prob(i) = logistic::sigmoid(problem.w0->dot(problem.X.row(i)));
    }
    problem.label_prob = prob;
    problem.well_specified = true;
    problem.labels.reset();
    return problem;
}

}  // namespace

TEST_CASE("population objective: w0 is the minimizer when well-specified") {
    const auto problem = well_specified_problem(40, 3, 41);
    const auto j0 = logistic::population_objective(problem);
    CHECK(j0.gradient(*problem.w0).norm() <= 1e-12);
    auto rng = substream(42, 0);
    const double at_w0 = j0.value(*problem.w0);
    for (int i = 0; i < 100; ++i) {
        const VectorXd w = random_vector(3, rng);
        CHECK(j0.value(w) >= at_w0 - 1e-12);
    }
}

TEST_CASE("identity J0_hat(w) = J0(w) - q'w for realized labels") {
    const auto problem = well_specified_problem(40, 3, 43);
    const auto j0 = logistic::population_objective(problem);
    auto rng = substream(44, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const VectorXd y = logistic::sample_labels(problem, 45, rep);
        const auto j0_hat = logistic::empirical_objective(problem, y);
        const VectorXd q = logistic::q_vector(problem, y);
        const VectorXd w = random_vector(3, rng);
        CHECK(j0_hat.value(w) - j0.value(w) + q.dot(w) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("sample_labels: degenerate probabilities, binomial mean, determinism") {
    logistic::DesignProblem problem;
    problem.X = MatrixXd::Ones(50, 1);
    problem.label_prob = VectorXd::Ones(50);
    problem.set_radius();
    const VectorXd all_plus = logistic::sample_labels(problem, 9);
    CHECK(all_plus.minCoeff() == 1.0);

    const Eigen::Index n = 100000;
    logistic::DesignProblem fair;
    fair.X = MatrixXd::Ones(n, 1);
    fair.label_prob = VectorXd::Constant(n, 0.5);
    fair.set_radius();
    const VectorXd y = logistic::sample_labels(fair, 10);
    CHECK(std::abs(y.mean()) <= 4.0 / std::sqrt(static_cast<double>(n)));

    const VectorXd again = logistic::sample_labels(fair, 10);
    CHECK((y - again).norm() == 0.0);
    const VectorXd different = logistic::sample_labels(fair, 11);
    CHECK((y - different).norm() > 0.0);
}

TEST_CASE("noise model: sigma2 = ell'' under (A3), Monte-Carlo variance") {
    const auto problem = well_specified_problem(30, 3, 51);
    const auto nm = logistic::noise_model(problem);
    for (Eigen::Index i = 0; i < problem.n(); ++i) {
        const double u = problem.w0->dot(problem.X.row(i));
        CHECK(nm.sigma2(i) == doctest::Approx(logistic::ell_d2(u)).epsilon(1e-12));
        CHECK(nm.sigma2(i) > 0.0);
        CHECK(nm.sigma2(i) <= 0.25 + 1e-15);
    }

    // empirical var(y_i/2) over 1e5 draws, 5 standard errors
    const int draws = 100000;
    VectorXd sum = VectorXd::Zero(problem.n());
    VectorXd sumsq = VectorXd::Zero(problem.n());
    for (int r = 0; r < draws; ++r) {
        const VectorXd eps = logistic::noise_from_labels(
            problem, logistic::sample_labels(problem, 52, r));
        sum += eps;
        sumsq += eps.cwiseProduct(eps);
    }
    for (Eigen::Index i = 0; i < problem.n(); ++i) {
        const double var = sumsq(i) / draws - std::pow(sum(i) / draws, 2);
        // var of the variance estimate of a bounded variable: <= 1/(16 draws)
        const double se = 0.25 / std::sqrt(static_cast<double>(draws));
        CHECK(std::abs(var - nm.sigma2(i)) <= 5.0 * se);
    }
}

TEST_CASE("q sampler: Monte-Carlo mean is centered") {
    const auto problem = well_specified_problem(20, 3, 61);
    const int draws = 100000;
    VectorXd mean = VectorXd::Zero(3);
    for (int r = 0; r < draws; ++r) {
        mean += logistic::q_vector(problem,
                                   logistic::sample_labels(problem, 62, r));
    }
    mean /= static_cast<double>(draws);
    const auto nm = logistic::noise_model(problem);
    const double sigma_max = std::sqrt(nm.sigma2.maxCoeff());
    const double bound = 5.0 * sigma_max * problem.X.norm() /
                         (problem.n() * std::sqrt(static_cast<double>(draws)));
    CHECK(mean.norm() <= bound);
}

TEST_CASE("weighted_gram matches the explicit loop") {
    const auto problem = well_specified_problem(25, 3, 71);
    const MatrixXd q = logistic::weighted_gram(problem);
    const auto nm = logistic::noise_model(problem);
    MatrixXd expected = MatrixXd::Zero(3, 3);
    for (Eigen::Index i = 0; i < problem.n(); ++i) {
        const VectorXd xi = problem.X.row(i);
        expected += nm.sigma2(i) * xi * xi.transpose();
    }
    expected /= static_cast<double>(problem.n());
    CHECK((q - expected).norm() <= 1e-12 * (1.0 + expected.norm()));
}

TEST_CASE("g(t) = J0_hat(w + tv) obeys the R-bound hypothesis") {
    const auto problem = testutil::random_problem(15, 3, 81);
    const auto oracle = logistic::empirical_objective(problem);
    auto rng = substream(82, 0);
    for (int i = 0; i < 1000; ++i) {
        const VectorXd w = random_vector(3, rng);
        const VectorXd v = random_vector(3, rng);
        const double t = scordant::normal(rng);
        const VectorXd wt = w + t * v;
        const MatrixXd h = oracle.hessian(wt);
        const double g3 = oracle.third_directional(wt, v, v, v);
        const double g2 = std::max(v.dot(h * v), 0.0);
        CHECK(std::abs(g3) <=
              oracle.r_constant * v.norm() * g2 + 1e-12 * (1.0 + g2));
    }
}

TEST_CASE("validate enforces the structural invariants") {
    auto problem = well_specified_problem(10, 2, 91);
    CHECK_NOTHROW(problem.validate());

    auto bad_radius = problem;
    bad_radius.radius_R *= 2.0;
    CHECK_THROWS_AS(bad_radius.validate(), Error);

    auto bad_prob = problem;
    (*bad_prob.label_prob)(0) += 0.1;  // no longer sigma(w0'x)
    CHECK_THROWS_AS(bad_prob.validate(), Error);

    auto bad_labels = problem;
    bad_labels.labels = VectorXd::Constant(10, 0.5);
    CHECK_THROWS_AS(bad_labels.validate(), Error);
}
