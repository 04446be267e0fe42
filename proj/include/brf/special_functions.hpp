#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "brf/params.hpp"

namespace brf {

namespace detail {

// Lanczos coefficients, g = 7, n = 9 (about 13 correct digits on the
// right half plane).
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

/// sin(pi z) with argument reduction on the real part, so accuracy does not
/// degrade for large |Re z|. Half-integer real parts produce an exactly zero
/// component with the sign conventions of the principal branch; the reduction
/// rounds ties to even for the same reason.
inline std::complex<double> sin_pi(std::complex<double> z) {
    const double n = std::nearbyint(z.real());
    const double xr = z.real() - n;
    const double sign = std::fmod(n, 2.0) == 0.0 ? 1.0 : -1.0;
    const double sx = std::abs(xr) == 0.5 ? (xr > 0 ? 1.0 : -1.0) : std::sin(std::numbers::pi * xr);
    const double cx = std::abs(xr) == 0.5 ? 0.0 : std::cos(std::numbers::pi * xr);
    const double py = std::numbers::pi * z.imag();
    return {sign * sx * std::cosh(py), sign * cx * std::sinh(py)};
}

}  // namespace detail

/// Principal branch of log Gamma (the analytic continuation that vanishes at
/// s = 1). Lanczos on Re s >= 0.5; the reflection formula with Hare's
/// unwinding term elsewhere. Poles at the non-positive integers.
inline std::complex<double> log_gamma(std::complex<double> s) {
    using namespace std::complex_literals;
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
        throw DomainError("log_gamma pole at non-positive integer");

    if (s.real() < 0.5) {
        const double two_pi = 2.0 * std::numbers::pi;
        const double wind = std::copysign(two_pi, s.imag()) * std::floor(0.5 * s.real() + 0.25);
        return std::complex<double>(std::log(std::numbers::pi), wind) -
               std::log(detail::sin_pi(s)) - log_gamma(1.0 - s);
    }

    const std::complex<double> z = s - 1.0;
    std::complex<double> sum = detail::kLanczos[0];
    for (int i = 1; i < 9; ++i) sum += detail::kLanczos[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + detail::kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

/// Complex Beta function B(p, q) = Gamma(p) Gamma(q) / Gamma(p+q).
inline std::complex<double> beta_complex(std::complex<double> p, std::complex<double> q) {
    return std::exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q));
}

/// Characteristic function of Z = log X:
/// psi_Z(t) = A^{it} B(1 - iat, 1 + ibt), principal branch throughout.
inline std::complex<double> charfn_z(const BrfParams& p, double t) {
    if (t == 0.0) return {1.0, 0.0};
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, t * p.log_scale()));
    return phase * beta_complex({1.0, -p.a * t}, {1.0, p.b * t});
}

}  // namespace brf
