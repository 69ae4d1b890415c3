#pragma once

#include <functional>
#include <memory>
#include <utility>

#include <Eigen/Dense>

#include "scordant/errors.hpp"

namespace scordant {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Access to a convex three-times-differentiable function F whose restriction
/// g(t) = F(w + tv) satisfies |g'''(t)| <= r_constant * ||v||_2 * g''(t).
///
/// third_directional is the trilinear form F'''(w)[u,v,t]; it is an optional
/// capability and may be left empty, in which case hypothesis checks fall
/// back to finite differences of the Hessian.
///
/// Oracles are immutable bundles of pure callables and safe to share across
/// concurrent callers as long as the captured state is.
struct ScfnOracle {
    Eigen::Index dimension = 0;
    double r_constant = 0.0;
    std::function<double(const VectorXd&)> value;
    std::function<VectorXd(const VectorXd&)> gradient;
    std::function<MatrixXd(const VectorXd&)> hessian;
    std::function<double(const VectorXd&, const VectorXd&, const VectorXd&,
                         const VectorXd&)>
        third_directional;

    bool has_third_directional() const { return static_cast<bool>(third_directional); }
};

/// F(w) = 1/2 w'Aw + b'w + c, with r_constant = 0.
inline ScfnOracle quadratic_oracle(MatrixXd a, VectorXd b, double c = 0.0) {
    ScfnOracle o;
    o.dimension = a.rows();
    o.r_constant = 0.0;
    auto as = std::make_shared<MatrixXd>(std::move(a));
    auto bs = std::make_shared<VectorXd>(std::move(b));
    o.value = [as, bs, c](const VectorXd& w) {
        return 0.5 * w.dot(*as * w) + bs->dot(w) + c;
    };
    o.gradient = [as, bs](const VectorXd& w) -> VectorXd { return *as * w + *bs; };
    o.hessian = [as](const VectorXd&) { return *as; };
    o.third_directional = [](const VectorXd&, const VectorXd&, const VectorXd&,
                             const VectorXd&) { return 0.0; };
    return o;
}

/// F(w) + ridge/2 ||w||_2^2. The third derivative is unchanged while the
/// Hessian only grows, so the same r_constant remains valid.
inline ScfnOracle add_ridge(ScfnOracle base, double ridge) {
    ScfnOracle o;
    o.dimension = base.dimension;
    o.r_constant = base.r_constant;
    auto b = std::make_shared<ScfnOracle>(std::move(base));
    o.value = [b, ridge](const VectorXd& w) {
        return b->value(w) + 0.5 * ridge * w.squaredNorm();
    };
    o.gradient = [b, ridge](const VectorXd& w) -> VectorXd {
        return b->gradient(w) + ridge * w;
    };
    o.hessian = [b, ridge](const VectorXd& w) -> MatrixXd {
        MatrixXd h = b->hessian(w);
        h.diagonal().array() += ridge;
        return h;
    };
    if (b->has_third_directional()) {
        o.third_directional = [b](const VectorXd& w, const VectorXd& u,
                                  const VectorXd& v, const VectorXd& t) {
            return b->third_directional(w, u, v, t);
        };
    }
    return o;
}

}  // namespace scordant
