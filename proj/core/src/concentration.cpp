#include "scordant/concentration.hpp"

#include <bit>
#include <cmath>

#include "scordant/linalg.hpp"
#include "scordant/rng.hpp"

namespace scordant::concentration {

namespace {

double tail_ceiling(double bound, int n_draws) {
    return bound +
           3.0 * std::sqrt(std::min(bound, 1.0) / static_cast<double>(n_draws));
}

}  // namespace

MatrixXd QuadFormInstance::S() const {
    const MatrixXd sy = sigma.asDiagonal() * Y;
    return sy * sy.transpose();
}

double QuadFormInstance::trace_S() const {
    return (sigma.asDiagonal() * Y).squaredNorm();
}

double QuadFormInstance::trace_S2() const {
    // tr S^2 = ||(Sigma Y)'(Sigma Y)||_F^2, computed in the p x p dimension
    const MatrixXd sy = sigma.asDiagonal() * Y;
    return (sy.transpose() * sy).squaredNorm();
}

double QuadFormInstance::lambda_max_S() const {
    const MatrixXd sy = sigma.asDiagonal() * Y;
    return std::max(SymEig(sy.transpose() * sy).max_eigenvalue(), 0.0);
}

void QuadFormInstance::validate() const {
    if (sigma.size() != Y.rows()) throw Error("QuadFormInstance: sigma size mismatch");
    if (Y.rows() > 0 && Y.rowwise().norm().maxCoeff() > b + 1e-12) {
        throw Error("QuadFormInstance: a row norm exceeds b");
    }
    if ((sigma.array() < 0.0).any() || (sigma.array() > 1.0).any()) {
        throw Error("QuadFormInstance: sigma entries must lie in [0,1]");
    }
}

NoiseSampler rademacher_noise(const QuadFormInstance& instance) {
    const VectorXd sigma = instance.sigma;
    return [sigma](std::mt19937_64& rng) -> VectorXd {
        VectorXd eps(sigma.size());
        for (Eigen::Index i = 0; i < eps.size(); ++i) {
            eps(i) = uniform01(rng) < 0.5 ? sigma(i) : -sigma(i);
        }
        return eps;
    };
}

NoiseSampler centered_bernoulli_noise(const VectorXd& prob) {
    return [prob](std::mt19937_64& rng) -> VectorXd {
        VectorXd eps(prob.size());
        for (Eigen::Index i = 0; i < eps.size(); ++i) {
            const double y = uniform01(rng) < prob(i) ? 1.0 : -1.0;
            eps(i) = 0.5 * y - (prob(i) - 0.5);
        }
        return eps;
    };
}

double prop4_bound(const QuadFormInstance& instance, double u) {
    if (u < 0.0) throw Error("prop4_bound: u must be nonnegative");
    const double tr_s = instance.trace_S();
    return 32.0 * std::sqrt(instance.trace_S2()) * std::sqrt(u) +
           18.0 * instance.lambda_max_S() * u +
           126.0 * instance.b * std::sqrt(tr_s) * std::pow(u, 1.5) +
           39.0 * instance.b * instance.b * u * u;
}

TailReport tail_check(const QuadFormInstance& instance,
                      const NoiseSampler& sampler,
                      const std::vector<double>& u_grid, int n_draws,
                      std::uint64_t seed) {
    instance.validate();
    const double tr_s = instance.trace_S();

    std::vector<double> thresholds;
    for (double u : u_grid) thresholds.push_back(prop4_bound(instance, u));

    std::vector<int> exceed(u_grid.size(), 0);
    double sum = 0.0, sum2 = 0.0;
    for (int draw = 0; draw < n_draws; ++draw) {
        auto rng = substream(seed, draw);
        const VectorXd eps = sampler(rng);
        if (eps.lpNorm<Eigen::Infinity>() > 1.0 + 1e-12) {
            throw Error("tail_check: sampler produced |eps| > 1");
        }
        const double qf = (instance.Y.transpose() * eps).squaredNorm();
        sum += qf;
        sum2 += qf * qf;
        const double dev = std::abs(qf - tr_s);
        for (std::size_t k = 0; k < u_grid.size(); ++k) {
            if (dev >= thresholds[k]) ++exceed[k];
        }
    }

    TailReport rep;
    rep.trace_S = tr_s;
    rep.mean_quadform = sum / n_draws;
    const double var = std::max(sum2 / n_draws - rep.mean_quadform * rep.mean_quadform, 0.0);
    rep.mean_se = std::sqrt(var / n_draws);
    rep.all_pass = true;
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
        TailPoint pt;
        pt.u = u_grid[k];
        pt.threshold = thresholds[k];
        pt.empirical_tail = static_cast<double>(exceed[k]) / n_draws;
        pt.bound = 8.0 * std::exp(-pt.u);
        pt.ceiling = tail_ceiling(pt.bound, n_draws);
        pt.pass = pt.empirical_tail <= pt.ceiling;
        rep.all_pass = rep.all_pass && pt.pass;
        rep.points.push_back(pt);
    }
    return rep;
}

SpecializedTail misspecified_tail(const DesignProblem& problem, double lambda,
                                  double u) {
    if (!(lambda > 0.0)) throw Error("misspecified_tail: lambda must be positive");
    SpecializedTail t;
    t.u = u;
    const double n = static_cast<double>(problem.n());
    const double r2 = problem.radius_R * problem.radius_R;
    t.threshold = 41.0 * r2 * u / (lambda * n) +
                  (r2 / lambda) * (8.0 * u * u / (n * n) +
                                   63.0 * std::pow(u, 1.5) / std::pow(n, 1.5));
    t.center = 0.0;
    t.probability_bound = 8.0 * std::exp(-u);
    return t;
}

SpecializedTail wellspecified_tail(const DesignProblem& problem, double lambda,
                                   double u) {
    if (!(lambda > 0.0)) throw Error("wellspecified_tail: lambda must be positive");
    const MatrixXd q_mat = logistic::weighted_gram(problem);
    const SymEig eig(q_mat);
    const double n = static_cast<double>(problem.n());
    double d1 = 0.0, d2 = 0.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double m = std::max(eig.eigenvalues()(k), 0.0);
        d1 += m / (m + lambda);
        d2 += m * m / ((m + lambda) * (m + lambda));
    }

    SpecializedTail t;
    t.u = u;
    t.center = d1 / n;
    const double r = problem.radius_R;
    t.threshold = 32.0 * std::sqrt(d2) * std::sqrt(u) / n + 18.0 * u / n +
                  53.0 * r * std::sqrt(d1) * std::pow(u, 1.5) /
                      (std::pow(n, 1.5) * std::sqrt(lambda)) +
                  9.0 * r * r * u * u / (lambda * n * n);
    t.probability_bound = 8.0 * std::exp(-u);
    return t;
}

QuadTailReport quadform_tail_check(const DesignProblem& problem, double lambda,
                                   const std::vector<double>& u_grid,
                                   int n_draws, std::uint64_t seed,
                                   bool well_specified) {
    MatrixXd q_reg = logistic::weighted_gram(problem);
    q_reg.diagonal().array() += lambda;
    const Eigen::LLT<MatrixXd> llt(q_reg);

    std::vector<SpecializedTail> tails;
    for (double u : u_grid) {
        tails.push_back(well_specified ? wellspecified_tail(problem, lambda, u)
                                       : misspecified_tail(problem, lambda, u));
    }

    std::vector<int> exceed(u_grid.size(), 0);
    double sum = 0.0, sum2 = 0.0;
    for (int draw = 0; draw < n_draws; ++draw) {
        const VectorXd y = logistic::sample_labels(problem, seed, draw);
        const VectorXd q = logistic::q_vector(problem, y);
        const double stat = q.dot(llt.solve(q));
        sum += stat;
        sum2 += stat * stat;
        for (std::size_t k = 0; k < u_grid.size(); ++k) {
            const double dev = well_specified ? std::abs(stat - tails[k].center)
                                              : stat;
            if (dev >= tails[k].threshold) ++exceed[k];
        }
    }

    QuadTailReport rep;
    rep.mean_quadform = sum / n_draws;
    rep.expected_center = tails.empty() ? 0.0 : tails.front().center;
    const double var = std::max(sum2 / n_draws - rep.mean_quadform * rep.mean_quadform, 0.0);
    rep.mean_se = std::sqrt(var / n_draws);
    rep.all_pass = true;
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
        TailPoint pt;
        pt.u = u_grid[k];
        pt.threshold = tails[k].threshold;
        pt.empirical_tail = static_cast<double>(exceed[k]) / n_draws;
        pt.bound = tails[k].probability_bound;
        pt.ceiling = tail_ceiling(pt.bound, n_draws);
        pt.pass = pt.empirical_tail <= pt.ceiling;
        rep.all_pass = rep.all_pass && pt.pass;
        rep.points.push_back(pt);
    }
    return rep;
}

double bernstein_bound(double variance_sum, double max_abs, double u) {
    if (variance_sum < 0.0 || max_abs < 0.0 || u < 0.0) {
        throw Error("bernstein_bound: inputs must be nonnegative");
    }
    return std::sqrt(2.0 * variance_sum * u) + max_abs * u / 3.0;
}

BernsteinReport bernstein_coinflip_check(int n_terms,
                                         const std::vector<double>& u_grid,
                                         int n_draws, std::uint64_t seed) {
    // flips valued +-1/2, drawn 64 at a time from the raw engine words
    const double variance_sum = 0.25 * n_terms;
    std::vector<double> thresholds;
    for (double u : u_grid) thresholds.push_back(bernstein_bound(variance_sum, 0.5, u));

    const int full_words = n_terms / 64;
    const int rest_bits = n_terms % 64;
    std::vector<int> exceed(u_grid.size(), 0);
    for (int draw = 0; draw < n_draws; ++draw) {
        auto rng = substream(seed, draw);
        long ones = 0;
        for (int wd = 0; wd < full_words; ++wd) {
            ones += std::popcount(rng());
        }
        if (rest_bits > 0) {
            ones += std::popcount(rng() >> (64 - rest_bits));
        }
        const double total = static_cast<double>(ones) - 0.5 * n_terms;
        for (std::size_t k = 0; k < u_grid.size(); ++k) {
            if (std::abs(total) >= thresholds[k]) ++exceed[k];
        }
    }

    BernsteinReport rep;
    rep.all_pass = true;
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
        TailPoint pt;
        pt.u = u_grid[k];
        pt.threshold = thresholds[k];
        pt.empirical_tail = static_cast<double>(exceed[k]) / n_draws;
        pt.bound = 2.0 * std::exp(-pt.u);
        pt.ceiling = tail_ceiling(pt.bound, n_draws);
        pt.pass = pt.empirical_tail <= pt.ceiling;
        rep.all_pass = rep.all_pass && pt.pass;
        rep.points.push_back(pt);
    }
    return rep;
}

}  // namespace scordant::concentration
