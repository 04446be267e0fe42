#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "brf/params.hpp"

namespace brf {

/// Parameter lines with an exact inverse survival function.
enum class SpecialCase {
    Degenerate,     ///< a = b = 0 (point mass at x = A)
    PowerEndpoint,  ///< a = 0: bounded support (0, A], power density
    Pareto,         ///< b = 0: one-tail Pareto on [A, inf)
    Lavalette,      ///< a = b
    TwiceRight,     ///< a = 2b (quadratic inversion)
    TwiceLeft,      ///< b = 2a
    ThriceRight,    ///< a = 3b (depressed cubic, p = q)
    ThriceLeft,     ///< b = 3a
    General,        ///< no analytic inverse; numeric root finding required
};

namespace detail {

constexpr double kTagRelTol = 1e-12;

inline bool ratio_matches(double p, double q) {
    return std::abs(p - q) <= kTagRelTol * std::max(p, q);
}

/// Real root in [0, 1] of u^3 + c*u - c = 0 for c >= 0.
///
/// Cardano form for p = q, rearranged so that every intermediate is a sum of
/// positive terms: t2 is recovered from t1*t2 = c/3 and the root from
/// t1^3 - t2^3 = c, which avoids the cancellation of the textbook expression
/// at both c -> 0 and c -> inf. One Newton step tightens the residual to
/// machine precision.
inline double depressed_cubic_root(double c) {
    if (c == 0.0) return 0.0;
    if (!std::isfinite(c)) return 1.0;
    double u;
    if (c > 1e9) {
        // u = 1 - 1/(c+3) + O(c^-3); the cube would overflow long before
        // the expansion error reaches double precision.
        u = 1.0 - 1.0 / (c + 3.0);
    } else {
        const double half = 0.5 * c;
        const double third = c / 3.0;
        const double s = std::sqrt(half * half + third * third * third);
        const double t1 = std::cbrt(s + half);
        const double t2 = third / t1;
        u = c / (t1 * t1 + t1 * t2 + t2 * t2);
    }
    for (int i = 0; i < 2; ++i) {
        const double denom = 3.0 * u * u + c;
        if (!(denom > 0.0) || !std::isfinite(denom)) break;
        u -= (u * u * u - c * (1.0 - u)) / denom;
    }
    return std::clamp(u, 0.0, 1.0);
}

}  // namespace detail

/// Classify params against the analytic lines, most specific first.
/// Zero exponents are matched exactly; the ratio lines (a=b, a=2b, ...)
/// within relative tolerance 1e-12, so fitted parameters land on General.
inline SpecialCase special_case_of(const BrfParams& p) {
    if (p.a == 0.0 && p.b == 0.0) return SpecialCase::Degenerate;
    if (p.a == 0.0) return SpecialCase::PowerEndpoint;
    if (p.b == 0.0) return SpecialCase::Pareto;
    if (detail::ratio_matches(p.a, p.b)) return SpecialCase::Lavalette;
    if (detail::ratio_matches(p.a, 2.0 * p.b)) return SpecialCase::TwiceRight;
    if (detail::ratio_matches(p.b, 2.0 * p.a)) return SpecialCase::TwiceLeft;
    if (detail::ratio_matches(p.a, 3.0 * p.b)) return SpecialCase::ThriceRight;
    if (detail::ratio_matches(p.b, 3.0 * p.a)) return SpecialCase::ThriceLeft;
    return SpecialCase::General;
}

/// Exact survival value u(x) where an analytic inversion exists.
///
/// Saturates rather than leaving the unit interval: PowerEndpoint returns 0
/// for x >= A (cdf already 1) and Pareto returns 1 for x below its support.
/// Empty for General and Degenerate.
inline std::optional<double> closed_survival(const BrfParams& p, double x) {
    if (!(x > 0.0)) throw DomainError("x must be positive");
    const double ratio = x / p.scale;
    switch (special_case_of(p)) {
        case SpecialCase::PowerEndpoint: {
            if (ratio >= 1.0) return 0.0;
            return 1.0 - std::pow(ratio, 1.0 / p.b);
        }
        case SpecialCase::Pareto:
            return std::min(std::pow(1.0 / ratio, 1.0 / p.a), 1.0);
        case SpecialCase::Lavalette:
            return 1.0 / (1.0 + std::pow(ratio, 1.0 / p.a));
        case SpecialCase::TwiceRight: {
            // y u^2 + u - 1 = 0, y = (x/A)^(1/b); rationalized positive root
            const double y = std::pow(ratio, 1.0 / p.b);
            return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * y));
        }
        case SpecialCase::TwiceLeft: {
            // F^2/(1-F) = (x/A)^(1/a); u = 1 - F without cancellation
            const double d = std::pow(ratio, 1.0 / p.a);
            return 2.0 / (d + 2.0 + std::sqrt(d) * std::sqrt(d + 4.0));
        }
        case SpecialCase::ThriceRight:
            return detail::depressed_cubic_root(std::pow(ratio, -1.0 / p.b));
        case SpecialCase::ThriceLeft: {
            // F^3 + D F - D = 0 then u = 1 - F = F^3/D (identity of the cubic)
            const double d = std::pow(ratio, 1.0 / p.a);
            if (d == 0.0) return 1.0;
            if (!std::isfinite(d)) return 0.0;
            const double f = detail::depressed_cubic_root(d);
            return std::min(f * f * f / d, 1.0);
        }
        default:
            return std::nullopt;
    }
}

/// Exact pdf in x space for the analytic parameter lines, empty otherwise.
///
/// The quadratic and cubic lines use the differentiated inversions, written
/// through the solved root so they stay finite over the whole support.
inline std::optional<double> closed_density_x(const BrfParams& p, double x) {
    if (!(x > 0.0)) throw DomainError("x must be positive");
    const double ratio = x / p.scale;
    switch (special_case_of(p)) {
        case SpecialCase::PowerEndpoint: {
            if (ratio > 1.0) return 0.0;
            return std::pow(ratio, 1.0 / p.b) / (p.b * x);
        }
        case SpecialCase::Pareto: {
            if (ratio < 1.0) return 0.0;
            return std::pow(1.0 / ratio, 1.0 / p.a) / (p.a * x);
        }
        case SpecialCase::Lavalette: {
            const double rq = std::sqrt(std::pow(ratio, 1.0 / p.a));
            const double sum = rq + 1.0 / rq;
            return 1.0 / (p.a * x * sum * sum);
        }
        case SpecialCase::TwiceRight: {
            const double y = std::pow(ratio, 1.0 / p.b);
            const double s = std::sqrt(1.0 + 4.0 * y);
            return 2.0 * y / (p.b * x * s * (1.0 + 2.0 * y + s));
        }
        case SpecialCase::TwiceLeft: {
            const double d = std::pow(ratio, 1.0 / p.a);
            if (d == 0.0) return 0.0;
            const double sd = std::sqrt(d) * std::sqrt(d + 4.0);
            const double u = 2.0 / (d + 2.0 + sd);
            return u * d / (p.a * x * sd);
        }
        case SpecialCase::ThriceRight: {
            // implicit differentiation of u^3 + C u - C = 0
            const double c = std::pow(ratio, -1.0 / p.b);
            if (!std::isfinite(c) || c == 0.0) return 0.0;
            const double u = detail::depressed_cubic_root(c);
            return c * (1.0 - u) / (p.b * x * (3.0 * u * u + c));
        }
        case SpecialCase::ThriceLeft: {
            const double d = std::pow(ratio, 1.0 / p.a);
            if (!std::isfinite(d) || d == 0.0) return 0.0;
            const double f = detail::depressed_cubic_root(d);
            return f * f * f / (p.a * x * (3.0 * f * f + d));
        }
        default:
            return std::nullopt;
    }
}

/// Log-space Lavalette density: the reciprocal square of a catenary,
/// f(z) = 1 / (a (e^{-z'/2a} + e^{z'/2a})^2) with z' = z - log A.
inline double lavalette_density_z(const BrfParams& p, double z) {
    if (special_case_of(p) != SpecialCase::Lavalette)
        throw DomainError("lavalette_density_z requires a = b > 0");
    const double zp = (z - p.log_scale()) / (2.0 * p.a);
    const double sum = std::exp(-zp) + std::exp(zp);
    const double denom = p.a * sum * sum;
    return std::isfinite(denom) ? 1.0 / denom : 0.0;
}

}  // namespace brf
