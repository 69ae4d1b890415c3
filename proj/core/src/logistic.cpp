#include "scordant/logistic.hpp"

#include <cmath>
#include <memory>

#include "scordant/rng.hpp"

namespace scordant::logistic {

double sigmoid(double u) {
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

double ell(double u) {
    const double a = std::abs(u);
    return 0.5 * a + std::log1p(std::exp(-a));
}

double ell_d1(double u) { return sigmoid(u) - 0.5; }

double ell_d2(double u) {
    const double s = sigmoid(-std::abs(u));  // min(sigma, 1-sigma), avoids 1-1
    return s * (1.0 - s);
}

double ell_d3(double u) {
    // sigma(1-sigma)(1-2 sigma) with 1 - 2 sigma(u) = -tanh(u/2), so the
    // |ell'''| <= ell'' identity is exact in floating point
    return -ell_d2(u) * std::tanh(0.5 * u);
}

void DesignProblem::validate() const {
    const double r = X.rows() > 0 ? X.rowwise().norm().maxCoeff() : 0.0;
    if (std::abs(r - radius_R) > 1e-9 * (1.0 + r)) {
        throw Error("radius_R does not match the maximum row norm of X");
    }
    if (labels) {
        if (labels->size() != n()) throw Error("labels size mismatch");
        for (Eigen::Index i = 0; i < labels->size(); ++i) {
            const double y = (*labels)(i);
            if (y != 1.0 && y != -1.0) throw Error("labels must be in {-1,+1}");
        }
    }
    if (label_prob) {
        if (label_prob->size() != n()) throw Error("label_prob size mismatch");
        if ((label_prob->array() <= 0.0).any() || (label_prob->array() >= 1.0).any()) {
            throw Error("label_prob entries must lie in (0,1)");
        }
    }
    if (w0 && w0->size() != p()) throw Error("w0 size mismatch");
    if (well_specified) {
        if (!w0 || !label_prob) throw Error("well-specified problem needs w0 and label_prob");
        for (Eigen::Index i = 0; i < n(); ++i) {
            const double s = sigmoid(w0->dot(X.row(i)));
            if (std::abs(s - (*label_prob)(i)) > 1e-12) {
                throw Error("well-specified flag set but label_prob != sigmoid(w0'x)");
            }
        }
    }
    if (normalized) {
        for (Eigen::Index j = 0; j < p(); ++j) {
            if (X.col(j).squaredNorm() / static_cast<double>(n()) > 1.0 + 1e-12) {
                throw Error("normalized flag set but a covariate has mean-square > 1");
            }
        }
    }
}

namespace {

// Shared by the oracle closures: design plus the per-row linear coefficient
// c_i subtracted from ell(w'x_i), i.e. value = mean(ell(Xw) - c .* Xw).
struct ObjectiveData {
    MatrixXd X;
    VectorXd c;
};

ScfnOracle make_objective(std::shared_ptr<const ObjectiveData> d, double radius) {
    ScfnOracle o;
    o.dimension = d->X.cols();
    o.r_constant = radius;
    o.value = [d](const VectorXd& w) {
        const VectorXd t = d->X * w;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            acc += ell(t(i)) - d->c(i) * t(i);
        }
        return acc / static_cast<double>(t.size());
    };
    o.gradient = [d](const VectorXd& w) -> VectorXd {
        VectorXd t = d->X * w;
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            t(i) = ell_d1(t(i)) - d->c(i);
        }
        return d->X.transpose() * t / static_cast<double>(t.size());
    };
    o.hessian = [d](const VectorXd& w) -> MatrixXd {
        VectorXd t = d->X * w;
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            t(i) = ell_d2(t(i));
        }
        return d->X.transpose() * t.asDiagonal() * d->X / static_cast<double>(t.size());
    };
    o.third_directional = [d](const VectorXd& w, const VectorXd& u, const VectorXd& v,
                              const VectorXd& t) {
        const VectorXd xw = d->X * w;
        const VectorXd xu = d->X * u;
        const VectorXd xv = d->X * v;
        const VectorXd xt = d->X * t;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < xw.size(); ++i) {
            acc += ell_d3(xw(i)) * xu(i) * xv(i) * xt(i);
        }
        return acc / static_cast<double>(xw.size());
    };
    return o;
}

}  // namespace

ScfnOracle empirical_objective(const DesignProblem& problem) {
    if (!problem.labels) throw Error("empirical_objective: labels missing");
    return empirical_objective(problem, *problem.labels);
}

ScfnOracle empirical_objective(const DesignProblem& problem, const VectorXd& labels) {
    auto d = std::make_shared<ObjectiveData>();
    d->X = problem.X;
    d->c = 0.5 * labels;
    return make_objective(std::move(d), problem.radius_R);
}

ScfnOracle population_objective(const DesignProblem& problem) {
    if (!problem.label_prob) throw Error("population_objective: label_prob missing");
    auto d = std::make_shared<ObjectiveData>();
    d->X = problem.X;
    d->c = problem.label_prob->array() - 0.5;  // E(y_i/2)
    return make_objective(std::move(d), problem.radius_R);
}

VectorXd sample_labels(const DesignProblem& problem, std::uint64_t seed) {
    return sample_labels(problem, seed, 0);
}

VectorXd sample_labels(const DesignProblem& problem, std::uint64_t seed,
                       std::uint64_t counter) {
    if (!problem.label_prob) throw Error("sample_labels: label_prob missing");
    auto rng = substream(seed, counter);
    VectorXd y(problem.n());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        y(i) = uniform01(rng) < (*problem.label_prob)(i) ? 1.0 : -1.0;
    }
    return y;
}

NoiseModel noise_model(const DesignProblem& problem) {
    if (!problem.label_prob) throw Error("noise_model: label_prob missing");
    NoiseModel m;
    m.sigma2 = problem.label_prob->array() * (1.0 - problem.label_prob->array());
    return m;
}

VectorXd noise_from_labels(const DesignProblem& problem, const VectorXd& labels) {
    if (!problem.label_prob) throw Error("noise_from_labels: label_prob missing");
    return (0.5 * labels.array() - (problem.label_prob->array() - 0.5)).matrix();
}

VectorXd q_vector(const DesignProblem& problem, const VectorXd& labels) {
    return problem.X.transpose() * noise_from_labels(problem, labels) /
           static_cast<double>(problem.n());
}

VectorXd sample_q(const DesignProblem& problem, std::uint64_t seed) {
    return q_vector(problem, sample_labels(problem, seed));
}

MatrixXd weighted_gram(const DesignProblem& problem) {
    const NoiseModel m = noise_model(problem);
    return problem.X.transpose() * m.sigma2.asDiagonal() * problem.X /
           static_cast<double>(problem.n());
}

DesignProblem with_labels(const DesignProblem& problem, const VectorXd& labels) {
    DesignProblem out = problem;
    out.labels = labels;
    return out;
}

}  // namespace scordant::logistic
