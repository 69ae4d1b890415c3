#pragma once

#include <cstdint>
#include <string>

#include "scordant/logistic.hpp"
#include "scordant/ridge.hpp"

namespace scordant::datagen {

using logistic::DesignProblem;

/// Recipe for a synthetic fixed-design instance. Deterministic under `seed`.
struct InstanceSpec {
    Eigen::Index n = 0;
    Eigen::Index p = 0;

    enum class Design { gaussian, orthogonal, correlated, collinear, kernel };
    Design design = Design::gaussian;
    double corr = 0.5;             // correlated: cov(j,k) = corr^|j-k|
    double collinear_factor = 0.6; // collinear: x_p = factor (x_1 + x_2)
    std::string kernel_kind = "rbf";
    double bandwidth = 1.0;

    enum class W0 { zero, sparse, dense };
    W0 w0_kind = W0::zero;
    Eigen::Index sparsity = 0;  // |K| for sparse
    double amplitude = 0.0;     // nonzero magnitude for sparse
    double w0_norm = 1.0;       // ||w0||_2 for dense

    bool misspecified = false;
    double delta_link = 0.0;  // bounded link perturbation

    bool normalize = false;  // rescale covariates to unit mean-square
    double radius = 0.0;     // > 0: clip row norms to this value
    std::uint64_t seed = 0;
};

/// Builds the instance; label_prob is always populated (labels are left for
/// the checkers to sample). `clipped_fraction`, when given, receives the
/// fraction of rows rescaled by the radius clip.
DesignProblem generate(const InstanceSpec& spec,
                       double* clipped_fraction = nullptr);

struct EngineeredInstance {
    DesignProblem problem;
    ridge::RidgeDiagnostics diag;  // at the selected lambda
};

/// Searches a (lambda, ||w0||) grid over a Gaussian design so the resulting
/// kappa lands within 20% of the target; w0 points along the top eigenvector
/// of Q so the bias terms are controllable. Throws when the target is out of
/// reach at the given n, p.
EngineeredInstance engineer_kappa(double target_kappa, Eigen::Index n,
                                  Eigen::Index p, std::uint64_t seed);

}  // namespace scordant::datagen
