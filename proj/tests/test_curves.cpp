#include <cmath>
#include <stdexcept>
#include <vector>

#include "crc/curves.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crc;

TEST_SUITE_BEGIN("curves");

namespace {

YieldCurve ecb_style_curve() {
    // 33 maturities, 3 months to 30 years, mildly humped
    YieldCurve yc;
    for (double tau : {0.25, 0.5, 0.75, 1.0}) yc.maturities.push_back(tau);
    for (int y = 2; y <= 30; ++y) yc.maturities.push_back(static_cast<double>(y));
    for (double tau : yc.maturities) {
        yc.yields.push_back(0.015 + 0.012 * (1.0 - std::exp(-tau / 3.0)) -
                            0.004 * std::exp(-tau / 8.0));
    }
    return yc;
}

}  // namespace

TEST_CASE("flat yields give flat forwards with zero derivative") {
    YieldCurve yc;
    for (double tau : {0.25, 1.0, 2.0, 5.0, 10.0, 30.0}) {
        yc.maturities.push_back(tau);
        yc.yields.push_back(0.02);
    }
    const ForwardCurve fc = yields_to_forwards(yc, TimeGrid(0.1, 250));
    for (std::size_t n = 0; n < fc.grid.count; ++n) {
        CHECK(fc.values[n] == doctest::Approx(0.02).epsilon(1e-9));
        CHECK(std::abs(fc.deriv_values[n]) < 1e-8);
    }
}

TEST_CASE("linear yields r = c0 + c1 tau give h = c0 + 2 c1 tau") {
    // the natural boundary cannot reproduce the quadratic g = tau r exactly at
    // the ends, so check interior nodes with a dense knot set
    YieldCurve yc;
    for (double tau = 0.5; tau <= 10.01; tau += 0.5) {
        yc.maturities.push_back(tau);
        yc.yields.push_back(0.01 + 0.001 * tau);
    }
    const ForwardCurve fc = yields_to_forwards(yc, TimeGrid(0.05, 180));
    for (std::size_t n = 40; n < 140; n += 10) {
        const double tau = fc.grid.time(n);
        CHECK(fc.values[n] == doctest::Approx(0.01 + 0.002 * tau).epsilon(2e-4));
        CHECK(fc.deriv_values[n] == doctest::Approx(0.002).epsilon(0.05));
    }
}

TEST_CASE("ECB-style curve: forwards reproduce the input yields") {
    const YieldCurve yc = ecb_style_curve();
    const ForwardCurve fc = yields_to_forwards(yc, TimeGrid(1.0 / 240.0, 7201));
    const YieldCurve back = forwards_to_yields(fc, yc.maturities);
    for (std::size_t i = 0; i < yc.maturities.size(); ++i) {
        CHECK(back.yields[i] == doctest::Approx(yc.yields[i]).epsilon(1e-6));
    }
}

TEST_CASE("preconditions") {
    YieldCurve yc = ecb_style_curve();
    CHECK_THROWS_AS((void)yields_to_forwards(yc, TimeGrid(1.0, 32)), std::out_of_range);
    YieldCurve tiny;
    tiny.maturities = {1.0, 2.0, 3.0};
    tiny.yields = {0.01, 0.011, 0.012};
    CHECK_THROWS_AS((void)yields_to_forwards(tiny, TimeGrid(0.1, 5)), std::invalid_argument);
}

TEST_CASE("forwards_to_yields on closed forms") {
    const TimeGrid grid(0.01, 1001);
    SUBCASE("flat") {
        const ForwardCurve fc = oracles::flat_curve(0.03, grid);
        CHECK(forward_yield(fc, 5.0) == doctest::Approx(0.03).epsilon(1e-12));
    }
    SUBCASE("linear forward h = c tau gives r = c tau / 2") {
        ForwardCurve fc;
        fc.grid = grid;
        for (std::size_t n = 0; n < grid.count; ++n) {
            fc.values.push_back(0.004 * grid.time(n));
            fc.deriv_values.push_back(0.004);
        }
        CHECK(forward_yield(fc, 8.0) == doctest::Approx(0.004 * 4.0).epsilon(1e-10));
    }
    SUBCASE("smooth curve matches adaptive quadrature to O(step^2)") {
        const oracles::AnalyticCurve ana;
        const ForwardCurve fc = ana.sample(grid);
        const double exact =
            oracles::adaptive_simpson([&](double s) { return ana.value(s); }, 0.0, 7.3) / 7.3;
        CHECK(forward_yield(fc, 7.3) == doctest::Approx(exact).epsilon(5e-6));
    }
    SUBCASE("out of range") {
        const ForwardCurve fc = oracles::flat_curve(0.03, grid);
        CHECK_THROWS_AS((void)forward_yield(fc, 11.0), std::out_of_range);
        CHECK_THROWS_AS((void)forward_yield(fc, 0.0), std::out_of_range);
    }
}

TEST_CASE("shift") {
    ForwardCurve fc;
    fc.grid = TimeGrid(0.5, 4);
    fc.values = {1.0, 2.0, 3.0, 4.0};
    fc.deriv_values = {0.1, 0.2, 0.3, 0.4};

    const ForwardCurve same = shift(fc, 0);
    CHECK(same.values == fc.values);

    const ForwardCurve one = shift(fc, 1);
    CHECK(one.values == std::vector<double>{2.0, 3.0, 4.0});
    CHECK(one.deriv_values == std::vector<double>{0.2, 0.3, 0.4});

    // semigroup law, exact
    const ForwardCurve two_a = shift(shift(fc, 1), 1);
    const ForwardCurve two_b = shift(fc, 2);
    CHECK(two_a.values == two_b.values);

    CHECK_THROWS_AS((void)shift(fc, 3), std::out_of_range);
}

TEST_CASE("bond price from forwards") {
    const TimeGrid grid(0.01, 301);
    const ForwardCurve fc = oracles::flat_curve(0.02, grid);
    CHECK(bond_price_from_forwards(fc, 1.0) == doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
    CHECK(bond_price_from_forwards(fc, 0.0) == 1.0);

    // definitional identity with the yield
    const oracles::AnalyticCurve ana;
    const ForwardCurve fc2 = ana.sample(grid);
    const double T = 2.5;
    CHECK(-std::log(bond_price_from_forwards(fc2, T)) / T ==
          doctest::Approx(forward_yield(fc2, T)).epsilon(1e-13));
}

TEST_CASE("round trip is second order at interior nodes") {
    // yields sampled at every grid node, so both the quadrature and the
    // spline knots refine together with the step
    const oracles::AnalyticCurve ana;
    std::vector<double> errs;
    for (double step : {0.05, 0.025, 0.0125}) {
        const auto count = static_cast<std::size_t>(std::llround(10.0 / step)) + 1;
        const ForwardCurve fc = ana.sample(TimeGrid(step, count));
        std::vector<double> mats;
        for (std::size_t n = 1; n < count; ++n) mats.push_back(fc.grid.time(n));
        const YieldCurve yc = forwards_to_yields(fc, mats);
        const ForwardCurve back = yields_to_forwards(yc, TimeGrid(step, count - 1));
        double err = 0.0;
        // interior nodes away from the natural-spline boundary
        for (std::size_t n = count / 4; n < count / 2; ++n) {
            err = std::max(err, std::abs(back.values[n] - fc.values[n]));
        }
        errs.push_back(err);
    }
    CHECK(errs[1] < 0.3 * errs[0]);
    CHECK(errs[2] < 0.3 * errs[1]);
}

TEST_SUITE_END();
