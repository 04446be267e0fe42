#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "brf/params.hpp"

namespace brf {

/// log(S_t / S_{t-1}) for t = 2..T.
inline std::vector<double> log_returns(std::span<const double> prices) {
    if (prices.size() < 2) throw DataError("need at least two prices");
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0)) throw DataError("non-positive price");
        if (i > 0) out.push_back(std::log(prices[i] / prices[i - 1]));
    }
    return out;
}

/// Histogram over log-transformed data. density[i] = counts[i]/(n_total w_i),
/// normalized against the full sample, so excluded data shows up as
/// sum(density * width) < 1 together with the excluded flag.
struct LogHistogram {
    std::vector<double> edges;
    std::vector<std::int64_t> counts;
    std::vector<double> density;
    std::int64_t n_total = 0;
    std::int64_t n_excluded = 0;

    [[nodiscard]] std::size_t bins() const { return counts.size(); }
    [[nodiscard]] double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
    [[nodiscard]] double width(std::size_t i) const { return edges[i + 1] - edges[i]; }

    /// Approximate data quantile from cumulative counts, interpolated
    /// linearly inside the containing bin.
    [[nodiscard]] double quantile(double q) const {
        if (!(q > 0.0) || !(q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
        const double target = q * static_cast<double>(n_total - n_excluded);
        double cum = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const double next = cum + static_cast<double>(counts[i]);
            if (next >= target) {
                if (counts[i] == 0) return edges[i];
                return edges[i] + (target - cum) / static_cast<double>(counts[i]) * width(i);
            }
            cum = next;
        }
        return edges.back();
    }
};

namespace detail {

inline std::vector<double> to_log_space(std::span<const double> values, bool pre_logged) {
    std::vector<double> z;
    z.reserve(values.size());
    for (double v : values) {
        if (!pre_logged && !(v > 0.0)) throw DataError("non-positive value cannot be log-transformed");
        z.push_back(pre_logged ? v : std::log(v));
    }
    return z;
}

inline LogHistogram build_histogram(std::span<const double> z, std::vector<double> edges) {
    LogHistogram h;
    h.edges = std::move(edges);
    h.counts.assign(h.edges.size() - 1, 0);
    h.n_total = static_cast<std::int64_t>(z.size());
    const double lo = h.edges.front();
    const double hi = h.edges.back();
    for (double v : z) {
        if (v < lo || v > hi) {
            ++h.n_excluded;
            continue;
        }
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), v);
        std::size_t idx = static_cast<std::size_t>(it - h.edges.begin());
        idx = idx == 0 ? 0 : idx - 1;
        if (idx >= h.counts.size()) idx = h.counts.size() - 1;
        ++h.counts[idx];
    }
    h.density.resize(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        h.density[i] = static_cast<double>(h.counts[i]) /
                       (static_cast<double>(h.n_total) * h.width(i));
    return h;
}

}  // namespace detail

/// Equal-width histogram spanning [min z, max z].
inline LogHistogram log_histogram(std::span<const double> values, int bins,
                                  bool pre_logged = false) {
    if (values.size() < 10) throw DataError("need at least 10 values");
    if (bins < 1) throw DomainError("bin count must be positive");
    const auto z = detail::to_log_space(values, pre_logged);
    const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
    if (!(*mx > *mn)) throw DataError("degenerate range: all values equal");
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = *mn + (*mx - *mn) * static_cast<double>(i) / bins;
    edges.back() = *mx;
    return detail::build_histogram(z, std::move(edges));
}

/// Histogram with caller-provided edges; data outside them is counted as
/// excluded, not an error.
inline LogHistogram log_histogram(std::span<const double> values, std::vector<double> edges,
                                  bool pre_logged = false) {
    if (values.size() < 10) throw DataError("need at least 10 values");
    if (edges.size() < 2) throw DomainError("need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) throw DomainError("edges must be strictly increasing");
    return detail::build_histogram(detail::to_log_space(values, pre_logged), std::move(edges));
}

enum class FitMethod { Moments, MomentsJackknife, Tails, RankRegression };

struct MomentsDiagnostics {
    double mean_z = 0.0;
    double var_z = 0.0;
    double discriminant = 0.0;
    bool clamped_a = false;
    bool clamped_b = false;
    std::optional<double> raw_a;     ///< pre-jackknife estimates
    std::optional<double> raw_b;
    std::optional<double> jackknife_se_a;
    std::optional<double> jackknife_se_b;
};

struct TailsDiagnostics {
    double slope_left = 0.0;
    double slope_right = 0.0;
    double intercept_left = 0.0;
    double intercept_right = 0.0;
    double r2_left = 0.0;
    double r2_right = 0.0;
    int bins_left = 0;
    int bins_right = 0;
    double z_low = 0.0;   ///< regression uses bin centers below this
    double z_high = 0.0;  ///< and above this
};

struct RankDiagnostics {
    double intercept = 0.0;  ///< C of log x = C - a log r + b log r2
    double residual_rms = 0.0;
    std::size_t n = 0;
    std::size_t ties = 0;
};

struct FitResult {
    BrfParams params;
    FitMethod method;
    std::variant<MomentsDiagnostics, TailsDiagnostics, RankDiagnostics> diagnostics;
};

namespace detail {

struct MomentPair {
    double mean;
    double var;  ///< population convention (divide by n)
};

/// Moments estimator: a = Z/2 + R, b = -Z/2 + R with
/// R = sqrt(Z^2(pi^2-12) + 12 S^2)/(2 pi). Negative discriminant means the
/// sample is incompatible with the model.
inline std::pair<double, double> moments_estimates(const MomentPair& m) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double disc = m.mean * m.mean * (pi2 - 12.0) + 12.0 * m.var;
    if (disc < 0.0)
        throw NumericError("moment discriminant negative: data incompatible with the model");
    const double r = std::sqrt(disc) / (2.0 * std::numbers::pi);
    return {0.5 * m.mean + r, -0.5 * m.mean + r};
}

struct OlsLine {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double ss_res = 0.0;
};

inline OlsLine ols(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    OlsLine l;
    if (sxx <= 0.0) throw DataError("degenerate design: no spread in regressor");
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    l.ss_res = std::max(syy - l.slope * sxy, 0.0);
    l.r2 = syy > 0.0 ? 1.0 - l.ss_res / syy : 1.0;
    return l;
}

/// Least-squares quadratic fit; returns the residual sum of squares.
inline double quadratic_ss_res(std::span<const double> x, std::span<const double> y) {
    // normal equations for (1, x, x^2), solved by Gaussian elimination
    double m[3][4] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p[3] = {1.0, x[i], x[i] * x[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += p[r] * p[c];
            m[r][3] += p[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (m[col][col] == 0.0) return std::numeric_limits<double>::quiet_NaN();
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    const double coef[3] = {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fit = coef[0] + coef[1] * x[i] + coef[2] * x[i] * x[i];
        ss += (y[i] - fit) * (y[i] - fit);
    }
    return ss;
}

}  // namespace detail

/// Method of moments on log-space data, model convention A = 1 (data must be
/// pre-scaled). With jackknife, applies the leave-one-out bias correction
/// n*theta - (n-1)*mean(theta_i) using O(1) incremental moment updates.
/// Negative estimates are clamped to 0 and flagged.
inline FitResult fit_moments(std::span<const double> z, bool jackknife = false) {
    const std::size_t n = z.size();
    if (n < 3) throw DataError("need at least 3 values");

    double sum = 0.0;
    for (double v : z) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : z) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n);

    MomentsDiagnostics diag;
    diag.mean_z = mean;
    diag.var_z = var;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    diag.discriminant = mean * mean * (pi2 - 12.0) + 12.0 * var;

    auto [a_hat, b_hat] = detail::moments_estimates({mean, var});

    if (jackknife) {
        diag.raw_a = a_hat;
        diag.raw_b = b_hat;
        // leave-one-out moments from the full sums; Kahan accumulation keeps
        // the O(1/n) bias correction above the rounding floor
        double s2 = 0.0;
        for (double v : z) s2 += v * v;
        double acc_a = 0.0, acc_b = 0.0, comp_a = 0.0, comp_b = 0.0;
        double dev_a = 0.0, dev_b = 0.0;
        std::vector<double> loo_a(n), loo_b(n);
        const double n1 = static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double m_i = (sum - z[i]) / n1;
            const double v_i = std::max((s2 - z[i] * z[i]) / n1 - m_i * m_i, 0.0);
            auto [ai, bi] = detail::moments_estimates({m_i, v_i});
            loo_a[i] = ai;
            loo_b[i] = bi;
            double y = ai - comp_a, t = acc_a + y;
            comp_a = (t - acc_a) - y;
            acc_a = t;
            y = bi - comp_b;
            t = acc_b + y;
            comp_b = (t - acc_b) - y;
            acc_b = t;
        }
        const double mean_a = acc_a / static_cast<double>(n);
        const double mean_b = acc_b / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            dev_a += (loo_a[i] - mean_a) * (loo_a[i] - mean_a);
            dev_b += (loo_b[i] - mean_b) * (loo_b[i] - mean_b);
        }
        diag.jackknife_se_a = std::sqrt(n1 / static_cast<double>(n) * dev_a);
        diag.jackknife_se_b = std::sqrt(n1 / static_cast<double>(n) * dev_b);
        a_hat = static_cast<double>(n) * a_hat - n1 * mean_a;
        b_hat = static_cast<double>(n) * b_hat - n1 * mean_b;
    }

    if (a_hat < 0.0) {
        diag.clamped_a = true;
        a_hat = 0.0;
    }
    if (b_hat < 0.0) {
        diag.clamped_b = true;
        b_hat = 0.0;
    }
    return FitResult{BrfParams(1.0, a_hat, b_hat),
                     jackknife ? FitMethod::MomentsJackknife : FitMethod::Moments, diag};
}

/// Log-linear regression on the histogram tails: slope 1/b below the
/// left_quantile of the data, slope -1/a above the right_quantile.
/// Zero-count bins are skipped; a slope of the wrong sign is a model
/// violation.
inline FitResult fit_tails(const LogHistogram& hist, double left_quantile = 0.1,
                           double right_quantile = 0.9) {
    if (!(left_quantile > 0.0) || !(right_quantile < 1.0) || !(left_quantile < right_quantile))
        throw DomainError("need 0 < left_quantile < right_quantile < 1");
    TailsDiagnostics diag;
    diag.z_low = hist.quantile(left_quantile);
    diag.z_high = hist.quantile(right_quantile);

    std::vector<double> zl, yl, zr, yr;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        if (hist.counts[i] <= 0) continue;
        const double c = hist.center(i);
        if (c < diag.z_low) {
            zl.push_back(c);
            yl.push_back(std::log(hist.density[i]));
        } else if (c > diag.z_high) {
            zr.push_back(c);
            yr.push_back(std::log(hist.density[i]));
        }
    }
    if (zl.size() < 3 || zr.size() < 3)
        throw DataError("insufficient non-empty bins in a tail region");

    const auto left = detail::ols(zl, yl);
    const auto right = detail::ols(zr, yr);
    diag.slope_left = left.slope;
    diag.intercept_left = left.intercept;
    diag.r2_left = left.r2;
    diag.bins_left = static_cast<int>(zl.size());
    diag.slope_right = right.slope;
    diag.intercept_right = right.intercept;
    diag.r2_right = right.r2;
    diag.bins_right = static_cast<int>(zr.size());

    if (!(left.slope > 0.0))
        throw NumericError("left tail slope not positive: no exponential left tail");
    if (!(right.slope < 0.0))
        throw NumericError("right tail slope not negative: no exponential right tail");

    return FitResult{BrfParams(1.0, -1.0 / right.slope, 1.0 / left.slope), FitMethod::Tails,
                     diag};
}

/// Conversion of a rank-regression intercept to the continuous scale:
/// the discrete model x(r) = A_d (N+1-r)^b / r^a corresponds to the
/// normalized-rank scale A = A_d (N+1)^(b-a).
inline double dgbd_scale_to_continuous(double intercept, double a, double b, std::size_t n) {
    return std::exp(intercept) * std::pow(static_cast<double>(n) + 1.0, b - a);
}

/// Rank regression log x = C - a log r + b log r2 with r2 = N+1-r, fitted on
/// the descending-sorted sample. The reported scale is e^C (discrete-rank
/// convention); see dgbd_scale_to_continuous for the normalized-rank scale.
inline FitResult fit_rank(std::span<const double> x_values) {
    const std::size_t n = x_values.size();
    if (n < 4) throw DataError("need at least 4 values");
    std::vector<double> x(x_values.begin(), x_values.end());
    for (double v : x)
        if (!(v > 0.0)) throw DataError("non-positive value in rank regression input");
    std::sort(x.begin(), x.end(), std::greater<>());

    std::size_t ties = 0;
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] == x[i - 1])
            ++ties;
        else
            ++distinct;
    }
    if (distinct < 4) throw DataError("need at least 4 distinct values");
    if (2 * ties > n) throw DataError("more than half of the data tied: ranks ill-defined");

    // normal equations for (1, log r, log r2)
    double m[3][4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double lr = std::log(static_cast<double>(i + 1));
        const double lr2 = std::log(static_cast<double>(n - i));
        const double y = std::log(x[i]);
        const double reg[3] = {1.0, lr, lr2};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += reg[r] * reg[c];
            m[r][3] += reg[r] * y;
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (m[col][col] == 0.0) throw DataError("degenerate design matrix in rank regression");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    const double intercept = m[0][3] / m[0][0];
    const double coef_lr = m[1][3] / m[1][1];
    const double coef_lr2 = m[2][3] / m[2][2];

    RankDiagnostics diag;
    diag.intercept = intercept;
    diag.n = n;
    diag.ties = ties;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = intercept + coef_lr * std::log(static_cast<double>(i + 1)) +
                           coef_lr2 * std::log(static_cast<double>(n - i));
        ss += (std::log(x[i]) - fit) * (std::log(x[i]) - fit);
    }
    diag.residual_rms = std::sqrt(ss / static_cast<double>(n));

    const double a_hat = std::max(-coef_lr, 0.0);
    const double b_hat = std::max(coef_lr2, 0.0);
    return FitResult{BrfParams(std::exp(intercept), a_hat, b_hat), FitMethod::RankRegression,
                     diag};
}

enum class Shape { OneSidedPowerLaw, LognormalLike, TwoSidedBrf, Insufficient };

/// Thresholds of the histogram-shape heuristic. Defaults follow the
/// documented classification rules; everything is configurable.
struct ClassifyConfig {
    double peak_range_fraction = 0.10;  ///< peak within this share of the occupied range
    double linear_r2 = 0.95;
    double slope_gap = 0.25;             ///< relative gap of tail slope magnitudes
    double curvature_improvement = 0.10; ///< relative residual gain of a quadratic term
    int min_side_bins = 5;
    /// log-density line fits use bins with at least this count; sparser bins
    /// sit at the single-observation shelf and carry no shape information
    std::int64_t min_fit_count = 5;
};

struct ShapeEvidence {
    double peak_position_fraction = 0.0;
    int bins_left = 0;
    int bins_right = 0;
    double slope_left = 0.0;
    double slope_right = 0.0;
    double r2_left = 0.0;
    double r2_right = 0.0;
    double curvature_gain_left = 0.0;
    double curvature_gain_right = 0.0;
};

struct ShapeClass {
    Shape variant;
    ShapeEvidence evidence;
};

/// Shape heuristic on the log-space histogram:
///   - peak hugging the left edge (or no left side) with a linear right
///     decay: one-sided power law;
///   - both sides linear with clearly different slopes: two-sided;
///   - both sides curved, or symmetric slopes: lognormal-like;
///   - not enough occupied bins on a side: insufficient evidence.
inline ShapeClass classify_shape(const LogHistogram& hist, const ClassifyConfig& cfg = {}) {
    std::vector<std::size_t> occupied;
    for (std::size_t i = 0; i < hist.bins(); ++i)
        if (hist.counts[i] > 0) occupied.push_back(i);
    if (occupied.size() < 20) throw DataError("need at least 20 occupied bins");

    std::size_t mode_bin = occupied.front();
    for (std::size_t i : occupied)
        if (hist.counts[i] > hist.counts[mode_bin]) mode_bin = i;

    ShapeEvidence ev;
    const double span = static_cast<double>(occupied.back() - occupied.front());
    ev.peak_position_fraction =
        span > 0.0 ? static_cast<double>(mode_bin - occupied.front()) / span : 0.0;

    std::vector<double> zl, yl, zr, yr;
    for (std::size_t i : occupied) {
        if (i < mode_bin) ++ev.bins_left;
        if (i > mode_bin) ++ev.bins_right;
        if (hist.counts[i] < cfg.min_fit_count) continue;
        if (i < mode_bin) {
            zl.push_back(hist.center(i));
            yl.push_back(std::log(hist.density[i]));
        } else if (i > mode_bin) {
            zr.push_back(hist.center(i));
            yr.push_back(std::log(hist.density[i]));
        }
    }

    const auto analyze = [](std::span<const double> x, std::span<const double> y, double& slope,
                            double& r2, double& gain) {
        if (x.size() < 3) return;
        const auto line = detail::ols(x, y);
        slope = line.slope;
        r2 = line.r2;
        const double ss_quad = detail::quadratic_ss_res(x, y);
        gain = line.ss_res > 0.0 && std::isfinite(ss_quad) ? 1.0 - ss_quad / line.ss_res : 0.0;
    };
    analyze(zl, yl, ev.slope_left, ev.r2_left, ev.curvature_gain_left);
    analyze(zr, yr, ev.slope_right, ev.r2_right, ev.curvature_gain_right);

    const bool left_sparse = ev.bins_left < cfg.min_side_bins;
    const bool power_law_peak = ev.peak_position_fraction <= cfg.peak_range_fraction;
    if ((power_law_peak || left_sparse) && ev.r2_right >= cfg.linear_r2)
        return {Shape::OneSidedPowerLaw, ev};
    if (left_sparse || ev.bins_right < cfg.min_side_bins) return {Shape::Insufficient, ev};

    const double mag_l = std::abs(ev.slope_left);
    const double mag_r = std::abs(ev.slope_right);
    const bool slopes_close =
        std::abs(mag_l - mag_r) <= cfg.slope_gap * std::max(mag_l, mag_r);
    const bool both_linear = ev.r2_left >= cfg.linear_r2 && ev.r2_right >= cfg.linear_r2;
    const bool both_curved = ev.curvature_gain_left > cfg.curvature_improvement &&
                             ev.curvature_gain_right > cfg.curvature_improvement;

    if (both_linear && !slopes_close) return {Shape::TwoSidedBrf, ev};
    if (both_curved || slopes_close) return {Shape::LognormalLike, ev};
    return {Shape::Insufficient, ev};
}

}  // namespace brf
