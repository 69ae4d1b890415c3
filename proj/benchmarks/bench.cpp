#include <benchmark/benchmark.h>

#include "scordant/datagen.hpp"
#include "scordant/lasso.hpp"
#include "scordant/logistic.hpp"
#include "scordant/ridge.hpp"
#include "scordant/scfn.hpp"

namespace {

using namespace scordant;

logistic::DesignProblem make_problem(Eigen::Index n, Eigen::Index p,
                                     bool sparse) {
    datagen::InstanceSpec spec;
    spec.n = n;
    spec.p = p;
    if (sparse) {
        spec.w0_kind = datagen::InstanceSpec::W0::sparse;
        spec.sparsity = 3;
        spec.amplitude = 1.0;
        spec.normalize = true;
    } else {
        spec.w0_kind = datagen::InstanceSpec::W0::dense;
    }
    spec.seed = 7;
    return datagen::generate(spec);
}

void bm_fit_ridge(benchmark::State& state) {
    auto problem = make_problem(state.range(0), 10, false);
    const VectorXd y = logistic::sample_labels(problem, 7, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ridge::fit_ridge(problem, y, 0.1).w_hat);
    }
}
BENCHMARK(bm_fit_ridge)->Arg(1000)->Arg(10000);

void bm_fit_lasso(benchmark::State& state) {
    auto problem = make_problem(state.range(0), 10, true);
    const VectorXd y = logistic::sample_labels(problem, 7, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lasso::fit_lasso(problem, y, 0.01).w_hat);
    }
}
BENCHMARK(bm_fit_lasso)->Arg(1000)->Arg(10000);

void bm_taylor_sandwich(benchmark::State& state) {
    auto problem = make_problem(state.range(0), 10, false);
    const VectorXd y = logistic::sample_labels(problem, 7, 0);
    const auto oracle = logistic::empirical_objective(problem, y);
    const VectorXd w = VectorXd::Constant(10, 0.1);
    const VectorXd v = VectorXd::Constant(10, -0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scfn::taylor_sandwich(oracle, w, v).upper);
    }
}
BENCHMARK(bm_taylor_sandwich)->Arg(1000)->Arg(10000);

void bm_restricted_eigenvalue(benchmark::State& state) {
    auto problem = make_problem(500, state.range(0), true);
    const MatrixXd q = logistic::weighted_gram(problem);
    const std::vector<Eigen::Index> k{0, 1, 2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(lasso::restricted_eigenvalue(q, k).rho);
    }
}
BENCHMARK(bm_restricted_eigenvalue)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
