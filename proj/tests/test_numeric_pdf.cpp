#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "brf/closed_forms.hpp"
#include "brf/core.hpp"
#include "brf/numeric_pdf.hpp"
#include "brf/stats.hpp"
#include "oracles.hpp"

using brf::BrfParams;
using brf::GridSpace;
using brf::NumericConfig;
using Catch::Approx;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

double max_lavalette_error(const brf::PdfGrid& grid) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.abscissae.size(); ++i) {
        const double exact = brf::lavalette_density_z({1, 1, 1}, grid.abscissae[i]);
        worst = std::max(worst, std::abs(grid.densities[i] - exact));
    }
    return worst;
}

}  // namespace

TEST_CASE("numeric_cdf solves the inversion by bisection") {
    CHECK(brf::numeric_cdf({1, 1, 1}, 1.0, NumericConfig{1e-12}) == Approx(0.5).margin(1e-12));
    CHECK(brf::numeric_cdf({1, 0, 1}, 0.3) == Approx(0.3).margin(1e-12));
    CHECK(brf::numeric_cdf({1, 2, 1}, 1.0) ==
          Approx(1.0 - (std::sqrt(5.0) - 1.0) / 2.0).margin(1e-12));
    CHECK_THROWS_AS(brf::numeric_cdf({1, 1, 1}, 0.0), brf::DomainError);
}

TEST_CASE("numeric_cdf ignores the closed-form dispatch") {
    // identical values, but the bisection path has tol-limited accuracy
    const BrfParams p{1, 1, 1};
    const NumericConfig loose{1e-4};
    const double numeric = brf::numeric_cdf(p, 1.37, loose);
    const double exact = 1.0 - *brf::closed_survival(p, 1.37);
    CHECK(numeric == Approx(exact).margin(1e-4));
    CHECK(std::abs(numeric - exact) > 1e-14);  // really went through bisection
}

TEST_CASE("Lavalette grid reconstruction meets the stated bound") {
    const auto grid = brf::pdf_grid({1, 1, 1}, linspace(-6.0, 6.0, 101),
                                    NumericConfig{1e-12, 1e-3}, GridSpace::Z);
    CHECK(max_lavalette_error(grid) <= 1e-8);
    for (const auto& info : grid.info) {
        CHECK(!info.one_sided);
        CHECK(info.converged);
    }
}

TEST_CASE("single-point grid at the mode recovers the peak height") {
    const BrfParams p{1, 4, 1};
    const double z0 = *brf::z_stats(p).mode;
    const auto grid =
        brf::pdf_grid(p, {z0}, NumericConfig{1e-13, 1e-3}, GridSpace::Z);
    CHECK(grid.densities[0] == Approx(1.0 / 9.0).margin(1e-6));
}

TEST_CASE("error scales as h^4 until the tolerance floor dominates") {
    const NumericConfig fixed_tol{1e-14};
    std::vector<double> errs;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
        const auto grid = brf::pdf_grid({1, 1, 1}, linspace(-6.0, 6.0, 101),
                                        NumericConfig{fixed_tol.tol, h}, GridSpace::Z);
        errs.push_back(max_lavalette_error(grid));
    }
    for (std::size_t i = 0; i < errs.size(); ++i) {
        const double h = i == 0 ? 1e-2 : (i == 1 ? 5e-3 : 2.5e-3);
        CHECK(errs[i] <= 10.0 * std::max(std::pow(h, 4.0), 1.5 * fixed_tol.tol / h));
    }
    CHECK(errs[0] / errs[1] >= 8.0);  // order ~4 while truncation dominates
}

TEST_CASE("error scales linearly in the tolerance at fixed step") {
    std::vector<double> errs;
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        const auto grid = brf::pdf_grid({1, 1, 1}, linspace(-6.0, 6.0, 101),
                                        NumericConfig{tol, 1e-3}, GridSpace::Z);
        errs.push_back(max_lavalette_error(grid));
        CHECK(errs.back() <= 10.0 * std::max(1e-12, 1.5 * tol / 1e-3));
    }
    const double order = std::log(errs[0] / errs[2]) / std::log(1e4);
    CHECK(order >= 0.8);
    CHECK(order <= 1.2);
}

TEST_CASE("grid densities match the direct density routines") {
    const BrfParams p{1, 0.99, 0.3};
    const NumericConfig cfg{1e-12, 1e-3};
    const auto zgrid = brf::pdf_grid(p, linspace(-2.0, 4.0, 25), cfg, GridSpace::Z);
    for (std::size_t i = 0; i < zgrid.abscissae.size(); ++i)
        CHECK(zgrid.densities[i] ==
              Approx(brf::density_z(p, zgrid.abscissae[i])).margin(1e-8));

    const auto xgrid = brf::pdf_grid(p, linspace(0.5, 4.0, 15), cfg, GridSpace::X);
    for (std::size_t i = 0; i < xgrid.abscissae.size(); ++i)
        CHECK(xgrid.densities[i] ==
              Approx(brf::density_x(p, xgrid.abscissae[i])).margin(1e-8));
}

TEST_CASE("reconstruction integrates to one") {
    const auto grid = brf::pdf_grid({1, 0.99, 0.3}, linspace(-15.0, 45.0, 2001),
                                    NumericConfig{1e-12, 1e-3}, GridSpace::Z);
    double mass = 0.0;
    for (std::size_t i = 1; i < grid.abscissae.size(); ++i)
        mass += 0.5 * (grid.densities[i] + grid.densities[i - 1]) *
                (grid.abscissae[i] - grid.abscissae[i - 1]);
    CHECK(mass == Approx(1.0).margin(1e-3));
}

TEST_CASE("support edges fall back to one-sided stencils") {
    // x space near the origin
    const auto near_zero = brf::pdf_grid({1, 0.6, 1.1}, {1e-5, 0.5},
                                         NumericConfig{1e-12, 1e-3}, GridSpace::X);
    CHECK(near_zero.info[0].one_sided);
    CHECK(!near_zero.info[1].one_sided);
    CHECK(near_zero.densities[1] == Approx(brf::density_x({1, 0.6, 1.1}, 0.5)).margin(1e-6));

    // bounded-support case: stencil may not cross x = A
    const auto endpoint = brf::pdf_grid({1, 0, 1.5}, {0.5, 0.9995},
                                        NumericConfig{1e-12, 1e-3}, GridSpace::X);
    CHECK(endpoint.info[1].one_sided);
    CHECK(endpoint.densities[1] ==
          Approx(*brf::closed_density_x({1, 0, 1.5}, 0.9995)).epsilon(1e-3));

    // Pareto support starts at A
    const auto pareto = brf::pdf_grid({1, 0.5, 0}, {1.001, 3.0},
                                      NumericConfig{1e-12, 1e-3}, GridSpace::X);
    CHECK(pareto.info[0].one_sided);
    CHECK(pareto.densities[0] ==
          Approx(*brf::closed_density_x({1, 0.5, 0}, 1.001)).epsilon(1e-3));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(brf::pdf_grid({1, 1, 1}, {1.0, 0.5}, NumericConfig{}, GridSpace::Z),
                    brf::DomainError);
    CHECK_THROWS_AS(brf::pdf_grid({1, 0, 0}, {0.5}, NumericConfig{}, GridSpace::Z),
                    brf::DegenerateError);
}
