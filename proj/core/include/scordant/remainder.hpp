#pragma once

#include <cmath>

namespace scordant {

// Remainder factors of the second-order Taylor sandwiches. All three are the
// continuous extensions at u = 0; below |u| = 1e-4 the closed forms lose all
// digits to cancellation, so a short Taylor series is used instead.

/// (e^u - u - 1) / u^2, extended with value 1/2 at u = 0.
inline double phi_plus(double u) {
    if (std::abs(u) < 1e-4) {
        return 0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u / 120.0));
    }
    return (std::expm1(u) - u) / (u * u);
}

/// (e^{-u} + u - 1) / u^2, extended with value 1/2 at u = 0.
inline double phi_minus(double u) { return phi_plus(-u); }

/// (e^u - 1 - u) / u, extended with value 0 at u = 0.
inline double psi(double u) {
    if (std::abs(u) < 1e-4) {
        return u * (0.5 + u * (1.0 / 6.0 + u / 24.0));
    }
    return (std::expm1(u) - u) / u;
}

/// (e^u - 1) / u, extended with value 1 at u = 0.
inline double expm1_over(double u) {
    if (std::abs(u) < 1e-4) {
        return 1.0 + u * (0.5 + u * (1.0 / 6.0 + u / 24.0));
    }
    return std::expm1(u) / u;
}

}  // namespace scordant
