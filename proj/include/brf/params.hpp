#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace brf {

/// Argument outside an operation's domain (bad u, wrong tail side, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised by operations that are undefined for the point-mass case a = b = 0.
struct DegenerateError : DomainError {
    DegenerateError() : DomainError("degenerate distribution (a = 0 and b = 0) has no density") {}
};

/// Root finding failed to converge within the iteration budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input data unusable for the requested computation (too few points,
/// non-positive values, degenerate range, excessive ties, ...).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Data incompatible with the model (negative moment discriminant,
/// tail slope of the wrong sign).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter triple (A, a, b) of one rank-size distribution
/// x(u) = A (1-u)^b / u^a on u in (0, 1].
///
/// `scale` (A) carries the units of x; `a` controls the right tail of the
/// log-density (decay rate 1/a) and `b` the left tail (rate 1/b).
struct BrfParams {
    double scale = 1.0;
    double a = 1.0;
    double b = 1.0;

    BrfParams() = default;
    BrfParams(double scale_, double a_, double b_) : scale(scale_), a(a_), b(b_) {
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw DomainError("scale parameter A must be positive and finite");
        if (!(a >= 0.0) || !std::isfinite(a))
            throw DomainError("exponent a must be non-negative and finite");
        if (!(b >= 0.0) || !std::isfinite(b))
            throw DomainError("exponent b must be non-negative and finite");
    }

    /// Point mass at x = A; survival and density are undefined.
    [[nodiscard]] bool degenerate() const { return a == 0.0 && b == 0.0; }

    [[nodiscard]] double log_scale() const { return std::log(scale); }
};

/// Tolerance/step configuration for root finding and stencil differentiation.
///
/// `tol` bounds the error of the inverted survival value u; `step` is the
/// finite-difference step (0 selects max(tol^(1/5), 1e-4), which balances
/// the h^4 truncation term against the tol/h propagation term).
struct NumericConfig {
    double tol = 1e-12;
    double step = 0.0;
    int max_iter = 200;

    NumericConfig() = default;
    NumericConfig(double tol_, double step_ = 0.0, int max_iter_ = 200)
        : tol(tol_), step(step_), max_iter(max_iter_) {
        if (!(tol > 0.0) || !(tol < 1.0))
            throw DomainError("tolerance must lie in (0, 1)");
        if (step < 0.0 || !std::isfinite(step))
            throw DomainError("step must be non-negative and finite");
        if (max_iter < 1)
            throw DomainError("max_iter must be positive");
    }

    [[nodiscard]] double resolved_step() const {
        return step > 0.0 ? step : std::max(std::pow(tol, 0.2), 1e-4);
    }
};

/// One point of the rank-size curve in all four coordinates.
struct RankPoint {
    double u;  ///< normalized rank / survival probability, in (0, 1]
    double x;  ///< observation value
    double z;  ///< log x
    double F;  ///< cdf, 1 - u
};

}  // namespace brf
