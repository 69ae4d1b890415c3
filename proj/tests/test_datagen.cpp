#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scordant/datagen.hpp"
#include "scordant/io.hpp"
#include "scordant/linalg.hpp"
#include "scordant/ridge.hpp"

#include "helpers.hpp"

using namespace scordant;
using datagen::InstanceSpec;

TEST_CASE("generate: determinism and basic validity") {
    InstanceSpec spec;
    spec.n = 60;
    spec.p = 5;
    spec.seed = 1200;
    spec.w0_kind = InstanceSpec::W0::dense;
    spec.w0_norm = 0.7;
    const auto a = datagen::generate(spec);
    const auto b = datagen::generate(spec);
    CHECK(io::problem_to_json(a).dump() == io::problem_to_json(b).dump());
    CHECK(a.n() == 60);
    CHECK(a.p() == 5);
    CHECK(a.well_specified);
    CHECK(a.w0->norm() == doctest::Approx(0.7).epsilon(1e-12));

    spec.seed = 1201;
    const auto c = datagen::generate(spec);
    CHECK(io::problem_to_json(a).dump() != io::problem_to_json(c).dump());
}

TEST_CASE("generate: orthogonal design has Gram n I and unit mean squares") {
    InstanceSpec spec;
    spec.n = 50;
    spec.p = 4;
    spec.design = InstanceSpec::Design::orthogonal;
    spec.seed = 1202;
    const auto problem = datagen::generate(spec);
    const MatrixXd gram =
        problem.X.transpose() * problem.X / static_cast<double>(problem.n());
    CHECK((gram - MatrixXd::Identity(4, 4)).lpNorm<Eigen::Infinity>() <= 1e-9);

    // near-zero sparse w0 keeps the per-row variance ~1/4, so the weighted
    // Gram is ~diagonal and the irrepresentable margin is ~1
    spec.w0_kind = InstanceSpec::W0::sparse;
    spec.sparsity = 2;
    spec.amplitude = 1e-6;
    const auto sparse = datagen::generate(spec);
    const MatrixXd q = logistic::weighted_gram(sparse);
    CHECK((q - 0.25 * MatrixXd::Identity(4, 4)).lpNorm<Eigen::Infinity>() <=
          1e-5);
}

TEST_CASE("generate: sparse w0 has the requested support and amplitude") {
    InstanceSpec spec;
    spec.n = 30;
    spec.p = 6;
    spec.seed = 1203;
    spec.w0_kind = InstanceSpec::W0::sparse;
    spec.sparsity = 3;
    spec.amplitude = 0.5;
    const auto problem = datagen::generate(spec);
    int nonzero = 0;
    double min_mag = 1e300;
    for (Eigen::Index j = 0; j < 6; ++j) {
        const double w = (*problem.w0)(j);
        if (w != 0.0) {
            ++nonzero;
            min_mag = std::min(min_mag, std::abs(w));
        }
    }
    CHECK(nonzero == 3);
    CHECK(min_mag == 0.5);
    CHECK((*problem.w0)(0) == 0.5);
    CHECK((*problem.w0)(1) == -0.5);

    spec.sparsity = 7;  // more nonzeros than coordinates
    CHECK_THROWS_AS(datagen::generate(spec), Error);
    spec.sparsity = 3;
    spec.amplitude = 0.0;
    CHECK_THROWS_AS(datagen::generate(spec), Error);
}

TEST_CASE("generate: radius clip enforces (A2) and reports the fraction") {
    InstanceSpec spec;
    spec.n = 400;
    spec.p = 10;
    spec.seed = 1204;
    spec.radius = 2.0;  // well below the typical chi norm ~ sqrt(10)
    double clipped = -1.0;
    const auto problem = datagen::generate(spec, &clipped);
    CHECK(problem.X.rowwise().norm().maxCoeff() <= 2.0 + 1e-12);
    CHECK(problem.radius_R <= 2.0 + 1e-12);
    CHECK(clipped > 0.5);  // nearly every row exceeds 2 at p = 10
    CHECK(clipped <= 1.0);

    spec.radius = 100.0;  // never binds
    datagen::generate(spec, &clipped);
    CHECK(clipped == 0.0);
}

TEST_CASE("generate: normalization, misspecification, design variants") {
    InstanceSpec spec;
    spec.n = 300;
    spec.p = 5;
    spec.seed = 1205;
    spec.normalize = true;
    const auto normed = datagen::generate(spec);
    CHECK(normed.normalized);
    for (Eigen::Index j = 0; j < 5; ++j) {
        CHECK(normed.X.col(j).squaredNorm() / 300.0 ==
              doctest::Approx(1.0).epsilon(1e-12));
    }

    spec.normalize = false;
    spec.w0_kind = InstanceSpec::W0::dense;
    spec.w0_norm = 0.5;
    spec.misspecified = true;
    spec.delta_link = 0.3;
    const auto mis = datagen::generate(spec);
    CHECK_FALSE(mis.well_specified);
    bool differs = false;
    for (Eigen::Index i = 0; i < mis.n(); ++i) {
        const double pr = (*mis.label_prob)(i);
        CHECK(pr >= 0.01);
        CHECK(pr <= 0.99);
        if (std::abs(pr - logistic::sigmoid(mis.w0->dot(mis.X.row(i)))) > 1e-6) {
            differs = true;
        }
    }
    CHECK(differs);

    spec.misspecified = false;
    spec.design = InstanceSpec::Design::collinear;
    spec.collinear_factor = 0.8;
    const auto col = datagen::generate(spec);
    CHECK((col.X.col(4) - 0.8 * (col.X.col(0) + col.X.col(1))).norm() == 0.0);

    spec.design = InstanceSpec::Design::correlated;
    spec.corr = 0.6;
    spec.n = 4000;
    const auto corr = datagen::generate(spec);
    const MatrixXd cov = corr.X.transpose() * corr.X / 4000.0;
    for (Eigen::Index j = 0; j < 5; ++j) {
        for (Eigen::Index k = 0; k < 5; ++k) {
            CHECK(cov(j, k) ==
                  doctest::Approx(std::pow(0.6, std::abs(double(j - k))))
                      .epsilon(0.12));
        }
    }

    spec.design = InstanceSpec::Design::kernel;
    spec.kernel_kind = "brownian";
    spec.n = 30;
    spec.p = 0;  // keep every component
    const auto ker = datagen::generate(spec);
    // feature map reproduces the kernel matrix
    const MatrixXd k_rec = ker.X * ker.X.transpose();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 30; ++i) {
        for (Eigen::Index j = 0; j < 30; ++j) {
            // recompute min(t_i, t_j) from the diagonal: k(i,i) = t_i
            const double kij = std::min(k_rec(i, i), k_rec(j, j));
            worst = std::max(worst, std::abs(k_rec(i, j) - kij));
        }
    }
    CHECK(worst <= 1e-8);

    spec.n = 0;
    CHECK_THROWS_AS(datagen::generate(spec), Error);
}

TEST_CASE("engineer_kappa: hits 1/16 at n = 5000, p = 10") {
    const auto inst = datagen::engineer_kappa(1.0 / 16.0, 5000, 10, 1206);
    CHECK(inst.diag.kappa >= 0.8 / 16.0);
    CHECK(inst.diag.kappa <= 1.2 / 16.0);
    CHECK(inst.problem.well_specified);
    CHECK(inst.diag.has_w0);
    // recomputing diagnostics at the selected lambda reproduces the record
    const auto check = ridge::diagnostics(inst.problem, inst.diag.lambda);
    CHECK(check.kappa == doctest::Approx(inst.diag.kappa).epsilon(1e-10));

    CHECK_THROWS_AS(datagen::engineer_kappa(0.2, 100, 2, 1), Error);
    CHECK_THROWS_AS(datagen::engineer_kappa(0.0, 100, 2, 1), Error);
}

TEST_CASE("diagnostics: identity-spectrum design reproduces the kappa_var "
          "formula") {
    // +-1 pattern design with w0 = 0: Q = (1/4) I_p exactly, so
    // kappa_var = R sqrt(p) / sqrt(lambda n) independent of the eigenvalue
    const Eigen::Index n = 64, p = 3;
    MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
        x(i, 1) = (i % 4 < 2) ? 1.0 : -1.0;
        x(i, 2) = (i % 8 < 4) ? 1.0 : -1.0;
    }
    logistic::DesignProblem problem;
    problem.X = x;
    problem.set_radius();
    problem.w0 = VectorXd::Zero(p);
    problem.label_prob = VectorXd::Constant(n, 0.5);
    problem.well_specified = true;
    problem.validate();

    for (double lambda : {0.05, 0.5, 5.0}) {
        const auto d = ridge::diagnostics(problem, lambda);
        const double expected =
            problem.radius_R * std::sqrt(static_cast<double>(p)) /
            std::sqrt(lambda * static_cast<double>(n));
        CHECK(d.kappa_var == doctest::Approx(expected).epsilon(1e-9));
    }

    // kappa_var -> 0 as n grows at fixed lambda and design family
    MatrixXd x2(4 * n, p);
    for (Eigen::Index i = 0; i < 4 * n; ++i) {
        x2(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
        x2(i, 1) = (i % 4 < 2) ? 1.0 : -1.0;
        x2(i, 2) = (i % 8 < 4) ? 1.0 : -1.0;
    }
    auto bigger = problem;
    bigger.X = x2;
    bigger.set_radius();
    bigger.label_prob = VectorXd::Constant(4 * n, 0.5);
    bigger.validate();
    const double k_small = ridge::diagnostics(problem, 0.5).kappa_var;
    const double k_large = ridge::diagnostics(bigger, 0.5).kappa_var;
    CHECK(k_large == doctest::Approx(0.5 * k_small).epsilon(1e-9));
}
