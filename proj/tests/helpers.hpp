#pragma once

#include <random>

#include "scordant/logistic.hpp"
#include "scordant/oracle.hpp"
#include "scordant/rng.hpp"

namespace testutil {

using scordant::MatrixXd;
using scordant::ScfnOracle;
using scordant::VectorXd;

/// n=2, p=1, x = (1, -1), y = (1, -1): at w = 0 the empirical objective has
/// value log 2, gradient -1/2, Hessian 1/4.
inline scordant::logistic::DesignProblem two_point_problem() {
    scordant::logistic::DesignProblem problem;
    problem.X.resize(2, 1);
    problem.X << 1.0, -1.0;
    problem.labels = VectorXd(2);
    *problem.labels << 1.0, -1.0;
    problem.set_radius();
    return problem;
}

inline scordant::logistic::DesignProblem random_problem(Eigen::Index n,
                                                        Eigen::Index p,
                                                        std::uint64_t seed) {
    scordant::logistic::DesignProblem problem;
    auto rng = scordant::substream(seed, 0);
    problem.X.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            problem.X(i, j) = scordant::normal(rng);
        }
    }
    problem.labels = VectorXd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        (*problem.labels)(i) = scordant::uniform01(rng) < 0.5 ? -1.0 : 1.0;
    }
    problem.set_radius();
    return problem;
}

inline VectorXd random_vector(Eigen::Index p, std::mt19937_64& rng,
                              double scale = 1.0) {
    VectorXd v(p);
    for (Eigen::Index j = 0; j < p; ++j) v(j) = scale * scordant::normal(rng);
    return v;
}

/// Central finite difference of the oracle's value; independent of gradient().
inline VectorXd fd_gradient(const ScfnOracle& oracle, const VectorXd& w,
                            double h = 1e-5) {
    VectorXd g(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        VectorXd wp = w, wm = w;
        wp(j) += h;
        wm(j) -= h;
        g(j) = (oracle.value(wp) - oracle.value(wm)) / (2.0 * h);
    }
    return g;
}

/// Central finite difference of the oracle's gradient.
inline MatrixXd fd_hessian(const ScfnOracle& oracle, const VectorXd& w,
                           double h = 1e-5) {
    MatrixXd m(w.size(), w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        VectorXd wp = w, wm = w;
        wp(j) += h;
        wm(j) -= h;
        m.col(j) = (oracle.gradient(wp) - oracle.gradient(wm)) / (2.0 * h);
    }
    return 0.5 * (m + m.transpose());
}

}  // namespace testutil
