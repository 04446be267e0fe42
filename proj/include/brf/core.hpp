#pragma once

#include <algorithm>
#include <cmath>

#include "brf/closed_forms.hpp"
#include "brf/params.hpp"

namespace brf {

/// Rank-size function x(u) = A (1-u)^b / u^a, the inverse survival function.
/// Strictly decreasing on (0, 1]; x(1) is A when b = 0 and 0 otherwise.
inline double rank_size(const BrfParams& p, double u) {
    if (!(u > 0.0) || u > 1.0) throw DomainError("u must lie in (0, 1]");
    return p.scale * std::pow(1.0 - u, p.b) / std::pow(u, p.a);
}

/// log x(u) = log A + b log(1-u) - a log u, valid on the open interval.
inline double log_rank_size(const BrfParams& p, double u) {
    if (!(u > 0.0) || !(u < 1.0)) throw DomainError("u must lie in (0, 1)");
    return p.log_scale() + p.b * std::log1p(-u) - p.a * std::log(u);
}

namespace detail {

/// Bisection root of (x/A) u^a - (1-u)^b = 0, which is increasing in u.
/// The bracket (eps, 1-eps) is safe: x(u) is strictly monotone, so a root
/// outside it means the true u is within eps of the boundary and the
/// clamped endpoint is already within tolerance.
inline double bisect_survival(const BrfParams& p, double x, const NumericConfig& cfg) {
    const double r = x / p.scale;
    const auto g = [&](double u) { return r * std::pow(u, p.a) - std::pow(1.0 - u, p.b); };

    const double eps = std::min(cfg.tol, 1e-15);
    double lo = eps;
    double hi = 1.0 - eps;
    if (g(lo) >= 0.0) return lo;
    if (g(hi) <= 0.0) return hi;

    int iter = 0;
    while (hi - lo > cfg.tol) {
        if (++iter > cfg.max_iter)
            throw ConvergenceError("survival bisection exceeded max_iter");
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Survival function u(x): the exact closed form when the parameters sit on
/// an analytic line, bisection to within cfg.tol otherwise. The cdf is 1 - u.
inline double survival(const BrfParams& p, double x, const NumericConfig& cfg = {}) {
    if (!(x > 0.0)) throw DomainError("x must be positive");
    if (p.degenerate()) throw DegenerateError();
    if (auto exact = closed_survival(p, x)) return *exact;
    return detail::bisect_survival(p, x, cfg);
}

inline double cdf(const BrfParams& p, double x, const NumericConfig& cfg = {}) {
    return 1.0 - survival(p, x, cfg);
}

/// Density of Z = log X, evaluated through the survival value:
/// f_Z(z) = 1 / (b/(1-u) + a/u). Returns 0 outside the support and at
/// boundary underflow, which is the correct limiting value.
inline double density_z(const BrfParams& p, double z, const NumericConfig& cfg = {}) {
    if (p.degenerate()) throw DegenerateError();
    const double zp = z - p.log_scale();
    if (p.a == 0.0 && zp > 0.0) return 0.0;
    if (p.b == 0.0 && zp < 0.0) return 0.0;

    const double x = std::exp(z);
    if (!(x > 0.0) || !std::isfinite(x)) return 0.0;

    const double u = survival(p, x, cfg);
    if (u <= 0.0) return p.a == 0.0 ? 1.0 / p.b : 0.0;
    if (u >= 1.0) return p.b == 0.0 ? 1.0 / p.a : 0.0;

    const double term_a = p.a == 0.0 ? 0.0 : p.a / u;
    const double term_b = p.b == 0.0 ? 0.0 : p.b / (1.0 - u);
    return 1.0 / (term_a + term_b);
}

/// Density of X itself, f_X(x) = f_Z(log x) / x = -du/dx.
inline double density_x(const BrfParams& p, double x, const NumericConfig& cfg = {}) {
    if (!(x > 0.0)) throw DomainError("x must be positive");
    return density_z(p, std::log(x), cfg) / x;
}

enum class TailSide { Left, Right };

/// Asymptotic exponential approximants of f_Z away from the peak:
/// e^{-(z-log A)/a}/a on the right, e^{(z-log A)/b}/b on the left.
inline double tail_density_z(const BrfParams& p, double z, TailSide side) {
    const double zp = z - p.log_scale();
    if (side == TailSide::Right) {
        if (p.a == 0.0) throw DomainError("right tail approximant requires a > 0");
        return std::exp(-zp / p.a) / p.a;
    }
    if (p.b == 0.0) throw DomainError("left tail approximant requires b > 0");
    return std::exp(zp / p.b) / p.b;
}

/// All four coordinates of one rank-size point.
inline RankPoint rank_point(const BrfParams& p, double u) {
    const double x = rank_size(p, u);
    return RankPoint{u, x, std::log(x), 1.0 - u};
}

}  // namespace brf
