#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "brf/core.hpp"
#include "brf/params.hpp"

namespace brf {

/// Closed-form statistics of the log-transformed distribution.
/// mode/partition are present only for an interior peak (a > 0 and b > 0);
/// with a zero exponent the density peaks at a support boundary.
struct LogStats {
    double mean;
    double variance;
    double median;
    std::optional<double> mode;
    std::optional<double> partition_left;   ///< probability left of the mode, sqrt(b)/(sqrt(a)+sqrt(b))
    std::optional<double> partition_right;  ///< sqrt(a)/(sqrt(a)+sqrt(b))
};

inline LogStats z_stats(const BrfParams& p) {
    if (p.degenerate()) throw DegenerateError();
    LogStats s{};
    const double log_a_scale = p.log_scale();
    s.mean = log_a_scale + p.a - p.b;
    s.variance = (p.a - p.b) * (p.a - p.b) +
                 std::numbers::pi * std::numbers::pi * p.a * p.b / 3.0;
    s.median = log_a_scale + std::numbers::ln2 * (p.a - p.b);
    if (p.a > 0.0 && p.b > 0.0) {
        const double sa = std::sqrt(p.a), sb = std::sqrt(p.b);
        s.mode = log_a_scale + (p.a - p.b) * std::log(sa + sb) -
                 0.5 * (p.a * std::log(p.a) - p.b * std::log(p.b));
        s.partition_left = sb / (sa + sb);
        s.partition_right = sa / (sa + sb);
    }
    return s;
}

/// n-th raw moment E[X^n] = A^n B(1-na, 1+nb), finite iff n < 1/a.
/// Divergent moments return +infinity; they are a property, not a fault.
inline double raw_moment_x(const BrfParams& p, int n) {
    if (n < 1) throw DomainError("moment order must be a positive integer");
    const double na = n * p.a;
    const double nb = n * p.b;
    if (p.a > 0.0 && na >= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(p.scale, n) *
           std::exp(std::lgamma(1.0 - na) + std::lgamma(1.0 + nb) - std::lgamma(2.0 + nb - na));
}

/// Peak of the x-space density. An interior peak exists only when the
/// critical point of d^2x/du^2 lands inside (0, 1); otherwise the density
/// is monotone towards x -> 0+ or a support endpoint and at_boundary is set.
struct XMode {
    std::optional<double> u0;
    std::optional<double> x0;
    bool at_boundary = false;
};

inline XMode x_mode(const BrfParams& p) {
    if (p.degenerate()) throw DegenerateError();
    XMode m;
    // u0 = a(a+1) / (a(a-b+1) + sqrt(ab(a-b+1))): of the two equivalent
    // closed forms this one has no 0/0 at a = b, where it reduces to (1+a)/2.
    const double excess = p.a - p.b + 1.0;
    if (p.a == 0.0 || excess <= 0.0) {
        m.at_boundary = true;
        return m;
    }
    const double u0 = p.a * (p.a + 1.0) /
                      (p.a * excess + std::sqrt(p.a * p.b * excess));
    if (!(u0 > 0.0) || !(u0 < 1.0)) {
        m.at_boundary = true;
        return m;
    }
    m.u0 = u0;
    m.x0 = rank_size(p, u0);
    return m;
}

/// Median of X, directly from the rank-size function at u = 1/2.
inline double x_median(const BrfParams& p) {
    if (p.degenerate()) throw DegenerateError();
    return p.scale * std::pow(2.0, p.a - p.b);
}

/// Coefficients of f_Z(z) = c1 - c2 (z-z0)^2 + c3 (z-z0)^3 + O((z-z0)^4)
/// near the peak. c3 vanishes for a = b and carries the peak asymmetry.
struct TaylorCoeffs {
    double c1;
    double c2;
    double c3;
    double z0;
};

inline TaylorCoeffs taylor_coeffs(const BrfParams& p) {
    if (!(p.a > 0.0) || !(p.b > 0.0))
        throw DomainError("taylor_coeffs requires a > 0 and b > 0");
    const double sa = std::sqrt(p.a), sb = std::sqrt(p.b);
    const double sum = sa + sb;
    const double sum2 = sum * sum;
    const double sum4 = sum2 * sum2;
    TaylorCoeffs c{};
    c.c1 = 1.0 / sum2;
    c.c2 = 1.0 / (sa * sum4 * sb);
    c.c3 = (sa - sb) / (p.a * sum4 * sum * p.b);
    c.z0 = *z_stats(p).mode;
    return c;
}

}  // namespace brf
