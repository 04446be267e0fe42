#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "brf/numeric_pdf.hpp"
#include "brf/sampling.hpp"
#include "brf/stats.hpp"
#include "oracles.hpp"

using brf::BrfParams;
using Catch::Approx;
namespace ref = oracle::ref;

TEST_CASE("z_stats closed forms") {
    const auto sym = brf::z_stats({1, 1, 1});
    CHECK(sym.mean == Approx(0.0).margin(1e-15));
    CHECK(sym.median == Approx(0.0).margin(1e-15));
    CHECK(*sym.mode == Approx(0.0).margin(1e-15));
    CHECK(*sym.partition_left == Approx(0.5));
    CHECK(*sym.partition_right == Approx(0.5));
    CHECK(sym.variance == Approx(std::numbers::pi * std::numbers::pi / 3.0));

    CHECK(brf::z_stats({std::exp(1.0), 2, 0.5}).mean == Approx(2.5));
    CHECK(brf::z_stats({1, 0.99, 0.3}).mode.value() ==
          Approx(ref::mode_099_03).epsilon(1e-13));

    const auto pareto = brf::z_stats({1, 0.7, 0});
    CHECK_FALSE(pareto.mode.has_value());
    CHECK_FALSE(pareto.partition_left.has_value());
    CHECK_THROWS_AS(brf::z_stats({1, 0, 0}), brf::DegenerateError);
}

TEST_CASE("mode is the argmax of the reconstructed density") {
    const BrfParams p{1, 0.99, 0.3};
    const double z0 = *brf::z_stats(p).mode;
    const double numeric = oracle::argmax([&](double z) { return brf::density_z(p, z); },
                                          z0 - 1.0, z0 + 1.0);
    // localization of a flat peak through a tol=1e-12 inversion is ~sqrt(tol/c2)
    CHECK(z0 == Approx(numeric).margin(1e-5));
    for (double delta : {1e-3, 1e-2, 1e-1})
        CHECK(brf::density_z(p, z0) >= brf::density_z(p, z0 + delta));
}

TEST_CASE("raw moments: Beta-function values and divergence") {
    CHECK(brf::raw_moment_x({1, 0.5, 0}, 1) == Approx(2.0).epsilon(1e-13));
    CHECK(brf::raw_moment_x({1, 0, 1}, 1) == Approx(0.5).epsilon(1e-13));
    CHECK(std::isinf(brf::raw_moment_x({1, 0.5, 0.5}, 2)));
    CHECK(std::isinf(brf::raw_moment_x({1, 1, 1}, 1)));
    // scale enters as A^n
    CHECK(brf::raw_moment_x({3, 0.25, 0.5}, 2) ==
          Approx(9.0 * brf::raw_moment_x({1, 0.25, 0.5}, 2)).epsilon(1e-12));
    CHECK_THROWS_AS(brf::raw_moment_x({1, 1, 1}, 0), brf::DomainError);
}

TEST_CASE("x_mode interior and boundary cases") {
    const auto sym = brf::x_mode({1, 0.5, 0.5});
    REQUIRE(!sym.at_boundary);
    CHECK(*sym.u0 == Approx(0.75));
    CHECK(*sym.x0 == Approx(std::pow(1.0 / 3.0, 0.5)).epsilon(1e-13));

    const auto skew = brf::x_mode({1, 1, 0.5});
    REQUIRE(!skew.at_boundary);
    CHECK(*skew.u0 == Approx(ref::x_mode_u0_1_05).epsilon(1e-13));
    CHECK(*skew.x0 == Approx(ref::x_mode_x0_1_05).epsilon(1e-13));

    CHECK(brf::x_mode({1, 0.2, 2}).at_boundary);
    CHECK(brf::x_mode({1, 0, 1}).at_boundary);
    // interior root exists only while ab < a - b + 1
    CHECK(brf::x_mode({1, 4, 1}).at_boundary);
    CHECK(brf::x_mode({1, 1.5, 1.5}).at_boundary);
}

TEST_CASE("x_mode matches the argmax of the x density") {
    for (const BrfParams& p : {BrfParams{1, 1, 0.5}, BrfParams{1, 2, 0.5}, BrfParams{2, 0.5, 0.5}}) {
        const auto m = brf::x_mode(p);
        REQUIRE(!m.at_boundary);
        const double numeric = oracle::argmax([&](double x) { return brf::density_x(p, x); },
                                              *m.x0 * 0.2, *m.x0 * 3.0);
        CHECK(*m.x0 == Approx(numeric).margin(1e-4));
    }
}

TEST_CASE("x_median closed form and sampling oracle") {
    CHECK(brf::x_median({1, 0.6, 0.6}) == Approx(1.0));
    CHECK(brf::x_median({1, 1, 0}) == Approx(2.0));
    CHECK(brf::x_median({3, 0.99, 0.3}) == Approx(ref::x_median_3_099_03).epsilon(1e-13));

    auto sample = brf::sample_x({3, 0.99, 0.3}, 200'000, 11).values;
    std::nth_element(sample.begin(), sample.begin() + sample.size() / 2, sample.end());
    const double empirical = sample[sample.size() / 2];
    // 4 standard errors of the sample median
    const double f_med = brf::density_x({3, 0.99, 0.3}, brf::x_median({3, 0.99, 0.3}));
    const double se = 1.0 / (2.0 * f_med * std::sqrt(200'000.0));
    CHECK(std::abs(empirical - brf::x_median({3, 0.99, 0.3})) <= 4.0 * se);
}

TEST_CASE("taylor coefficients") {
    const auto sym = brf::taylor_coeffs({1, 1, 1});
    CHECK(sym.c1 == Approx(0.25));
    CHECK(sym.c2 == Approx(1.0 / 16.0));
    CHECK(sym.c3 == Approx(0.0).margin(1e-16));

    const auto skew = brf::taylor_coeffs({1, 4, 1});
    CHECK(skew.c1 == Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(skew.c2 == Approx(1.0 / 162.0).epsilon(1e-14));
    CHECK(skew.c3 == Approx(1.0 / 972.0).epsilon(1e-14));

    // asymmetry ratio grows with the parameter gap
    const double r1 = std::abs(brf::taylor_coeffs({1, 1, std::exp(2.0)}).c3 /
                               brf::taylor_coeffs({1, 1, std::exp(2.0)}).c2);
    const double r0 = std::abs(sym.c3 / sym.c2);
    CHECK(r1 > r0);
    CHECK_THROWS_AS(brf::taylor_coeffs({1, 1, 0}), brf::DomainError);
}

TEST_CASE("peak value and curvature match the Taylor coefficients") {
    for (const BrfParams& p : {BrfParams{1, 1, 1}, BrfParams{1, 4, 1}, BrfParams{1, 0.99, 0.3}}) {
        const auto c = brf::taylor_coeffs(p);
        const brf::NumericConfig tight{1e-14};
        CHECK(brf::density_z(p, c.z0, tight) == Approx(c.c1).margin(1e-8));
        const double d2 = oracle::second_diff(
            [&](double z) { return brf::density_z(p, z, tight); }, c.z0, 1e-3);
        CHECK(d2 == Approx(-2.0 * c.c2).epsilon(0.01));
    }
}

TEST_CASE("sample moments agree with z_stats") {
    const BrfParams p{1, 0.99, 0.3};
    const auto stats = brf::z_stats(p);
    const auto xs = brf::sample_x(p, 300'000, 99).values;
    std::vector<double> z(xs.size());
    std::transform(xs.begin(), xs.end(), z.begin(), [](double v) { return std::log(v); });

    const double n = static_cast<double>(z.size());
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : z) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;

    const double se_mean = std::sqrt(stats.variance / n);
    CHECK(std::abs(mean - stats.mean) <= 4.0 * se_mean);
    const double se_var = std::sqrt((m4 - m2 * m2) / n);
    CHECK(std::abs(m2 - stats.variance) <= 4.0 * se_var);

    std::vector<double> sorted = z;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double med = sorted[sorted.size() / 2];
    const double se_med = 1.0 / (2.0 * brf::density_z(p, stats.median) * std::sqrt(n));
    CHECK(std::abs(med - stats.median) <= 4.0 * se_med);
}

TEST_CASE("numeric cdf at the mode reproduces the probability partition") {
    for (const BrfParams& p : {BrfParams{1, 1, 1}, BrfParams{1, 0.99, 0.3}, BrfParams{2, 2, 0.5}}) {
        const auto s = brf::z_stats(p);
        const double f = brf::numeric_cdf(p, std::exp(*s.mode), brf::NumericConfig{1e-13});
        CHECK(f == Approx(*s.partition_left).margin(1e-6));
    }
}

TEST_CASE("moment oracle against sampling") {
    // n = 1 moment of a light-tailed case, 4 standard errors
    const BrfParams p{1, 0.2, 0.4};
    const auto xs = brf::sample_x(p, 300'000, 5).values;
    double mean = 0.0, sq = 0.0;
    for (double v : xs) {
        mean += v;
        sq += v * v;
    }
    const double n = static_cast<double>(xs.size());
    mean /= n;
    sq /= n;
    const double se = std::sqrt((sq - mean * mean) / n);
    CHECK(std::abs(mean - brf::raw_moment_x(p, 1)) <= 4.0 * se);
}

TEST_CASE("statistics respond to scale as a pure shift") {
    const BrfParams base{1, 1.3, 0.6};
    const BrfParams scaled{9.0, 1.3, 0.6};
    const auto s0 = brf::z_stats(base);
    const auto s1 = brf::z_stats(scaled);
    const double shift = std::log(9.0);
    CHECK(s1.mean == Approx(s0.mean + shift));
    CHECK(s1.median == Approx(s0.median + shift));
    CHECK(*s1.mode == Approx(*s0.mode + shift));
    CHECK(s1.variance == Approx(s0.variance));
    CHECK(*s1.partition_left == Approx(*s0.partition_left));
    const auto t0 = brf::taylor_coeffs(base);
    const auto t1 = brf::taylor_coeffs(scaled);
    CHECK(t1.c1 == Approx(t0.c1));
    CHECK(t1.c2 == Approx(t0.c2));
    CHECK(t1.c3 == Approx(t0.c3));
}
