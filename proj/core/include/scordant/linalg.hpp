#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "scordant/errors.hpp"

namespace scordant {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Symmetric eigendecomposition with eigenvalues clamped at zero. Matrix
// square roots, inverses and pseudo-inverses all go through this one path so
// results are reproducible across call sites.
class SymEig {
  public:
    explicit SymEig(const MatrixXd& a) : solver_(a) {
        if (solver_.info() != Eigen::Success) {
            throw EvaluationError("symmetric eigendecomposition failed");
        }
    }

    const VectorXd& eigenvalues() const { return solver_.eigenvalues(); }
    const MatrixXd& eigenvectors() const { return solver_.eigenvectors(); }
    double min_eigenvalue() const { return solver_.eigenvalues()(0); }
    double max_eigenvalue() const {
        return solver_.eigenvalues()(solver_.eigenvalues().size() - 1);
    }

    MatrixXd sqrt() const {
        return apply([](double e) { return std::sqrt(std::max(e, 0.0)); });
    }

    /// Pseudo-inverse; eigenvalues below `tol` are treated as zero.
    MatrixXd pinv(double tol) const {
        return apply([tol](double e) { return e > tol ? 1.0 / e : 0.0; });
    }

    MatrixXd inv_sqrt(double tol) const {
        return apply([tol](double e) { return e > tol ? 1.0 / std::sqrt(e) : 0.0; });
    }

    /// Pseudo-solve A x = b with the same eigenvalue floor as pinv.
    VectorXd solve(const VectorXd& b, double tol) const {
        const MatrixXd& v = solver_.eigenvectors();
        VectorXd c = v.transpose() * b;
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            c(i) = solver_.eigenvalues()(i) > tol ? c(i) / solver_.eigenvalues()(i) : 0.0;
        }
        return v * c;
    }

  private:
    template <class F>
    MatrixXd apply(F f) const {
        const MatrixXd& v = solver_.eigenvectors();
        VectorXd d = solver_.eigenvalues().unaryExpr(f);
        return v * d.asDiagonal() * v.transpose();
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver_;
};

inline double trace_scale(const MatrixXd& a) {
    double t = std::abs(a.trace());
    return t > 0.0 ? t : 1.0;
}

}  // namespace scordant
