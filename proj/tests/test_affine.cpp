#include <cmath>
#include <stdexcept>
#include <random>

#include "crc/affine.hpp"
#include "crc/volterra.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crc;

TEST_SUITE_BEGIN("affine");

TEST_CASE("vasicek riccati closed forms") {
    const VasicekParams p(0.01, -1.0);

    SUBCASE("initial conditions") {
        const RiccatiPair r = vasicek_riccati(p, 0.0);
        CHECK(r.phi == 0.0);
        CHECK(r.psi == 0.0);
        CHECK(r.psi_prime == -1.0);
    }
    SUBCASE("values at t = 1 against RK4 integration") {
        const RiccatiPair r = vasicek_riccati(p, 1.0);
        CHECK(r.psi == doctest::Approx(-0.632121).epsilon(1e-6));
        CHECK(r.phi == doctest::Approx(8.4046e-4).epsilon(1e-4));
        const auto ref = oracles::integrate_riccati(
            [&](double u) { return 0.5 * p.a * u * u; }, [&](double u) { return p.beta * u; },
            1.0, 1e-4);
        CHECK(r.phi == doctest::Approx(ref.phi).epsilon(1e-10));
        CHECK(r.psi == doctest::Approx(ref.psi).epsilon(1e-10));
    }
    SUBCASE("psi_prime matches centered differences of psi") {
        const double h = 1e-5;
        for (double t : {0.3, 1.7, 6.0}) {
            const double fd =
                (vasicek_riccati(p, t + h).psi - vasicek_riccati(p, t - h).psi) / (2.0 * h);
            CHECK(vasicek_riccati(p, t).psi_prime == doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("cir riccati closed forms") {
    const CirParams p(0.02, -0.5);
    CHECK(p.gamma == doctest::Approx(std::sqrt(0.29)).epsilon(1e-15));

    SUBCASE("initial conditions") {
        const RiccatiPair r = cir_riccati(p, 0.0);
        CHECK(r.psi == 0.0);
        CHECK(r.psi_prime == -1.0);
        CHECK(r.phi == 0.0);
    }
    SUBCASE("value at t = 1 against RK4 integration") {
        const RiccatiPair r = cir_riccati(p, 1.0);
        CHECK(r.psi == doctest::Approx(-0.7848981441).epsilon(1e-9));
        const auto ref = oracles::integrate_riccati(
            [](double) { return 0.0; },
            [&](double u) { return 0.5 * p.alpha * u * u + p.beta * u; }, 1.0, 1e-4);
        CHECK(r.psi == doctest::Approx(ref.psi).epsilon(1e-10));
    }
    SUBCASE("derivatives consistent with finite differences") {
        const double h = 1e-5;
        for (double t : {0.4, 2.0, 9.0}) {
            const double fd_p =
                (cir_riccati(p, t + h).psi - cir_riccati(p, t - h).psi) / (2.0 * h);
            CHECK(cir_riccati(p, t).psi_prime == doctest::Approx(fd_p).epsilon(1e-8));
            const double fd_s = (cir_riccati(p, t + h).psi_prime -
                                 cir_riccati(p, t - h).psi_prime) /
                                (2.0 * h);
            CHECK(cir_riccati(p, t).psi_second == doctest::Approx(fd_s).epsilon(1e-7));
        }
    }
    SUBCASE("riccati residual on a fine grid") {
        for (double t = 0.0; t <= 30.0; t += 0.25) {
            const RiccatiPair r = cir_riccati(p, t);
            const double resid = r.psi_prime - (riccati_R(p, r.psi) - 1.0);
            CHECK(std::abs(resid) < 1e-9);
        }
    }
}

TEST_CASE("randomized closed-form vs RK4 sweep") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> ua(1e-4, 0.1), ualpha(1e-3, 0.5),
        ubeta(-5.0, -0.01), ut(0.1, 30.0);
    for (int i = 0; i < 10; ++i) {
        const double t = ut(gen);
        {
            const VasicekParams p(ua(gen), ubeta(gen));
            const auto ref = oracles::integrate_riccati(
                [&](double u) { return 0.5 * p.a * u * u; },
                [&](double u) { return p.beta * u; }, t, 1e-4);
            const RiccatiPair r = vasicek_riccati(p, t);
            CHECK(std::abs(r.phi - ref.phi) < 1e-8);
            CHECK(std::abs(r.psi - ref.psi) < 1e-8);
        }
        {
            const CirParams p(ualpha(gen), ubeta(gen));
            const auto ref = oracles::integrate_riccati(
                [](double) { return 0.0; },
                [&](double u) { return 0.5 * p.alpha * u * u + p.beta * u; }, t, 1e-4);
            const RiccatiPair r = cir_riccati(p, t);
            CHECK(std::abs(r.psi - ref.psi) < 1e-8);
        }
    }
}

TEST_CASE("hjm coefficients") {
    SUBCASE("vasicek examples") {
        const VasicekParams p(0.01, -1.0);
        auto [d0, v0] = hjm_coeffs_vasicek(p, 0.0);
        CHECK(d0 == 0.0);
        CHECK(v0 == doctest::Approx(0.1).epsilon(1e-15));
        auto [d1, v1] = hjm_coeffs_vasicek(p, 1.0);
        CHECK(d1 == doctest::Approx(2.3254e-3).epsilon(1e-4));
        CHECK(v1 == doctest::Approx(0.1 * std::exp(-1.0)).epsilon(1e-12));
    }
    SUBCASE("vasicek drift condition via quadrature refines at second order") {
        const VasicekParams p(0.04, -0.7);
        const double tau = 2.0;
        auto resid = [&](int n) {
            const double h = tau / n;
            double integral = 0.0;
            for (int k = 0; k < n; ++k) {
                integral += 0.5 * h *
                            (hjm_coeffs_vasicek(p, k * h).second +
                             hjm_coeffs_vasicek(p, (k + 1) * h).second);
            }
            auto [drift, vol] = hjm_coeffs_vasicek(p, tau);
            return std::abs(drift - vol * integral);
        };
        const double r1 = resid(50), r2 = resid(100), r3 = resid(200);
        CHECK(r2 < 0.3 * r1);
        CHECK(r3 < 0.3 * r2);
    }
    SUBCASE("cir examples and drift condition") {
        const CirParams p(0.02, -0.5);
        auto [dz, vz] = hjm_coeffs_cir(p, 0.0, 1.0);
        CHECK(dz == 0.0);
        CHECK(vz == 0.0);
        auto [d0, v0] = hjm_coeffs_cir(p, 0.04, 0.0);
        CHECK(d0 == 0.0);
        CHECK(v0 == doctest::Approx(std::sqrt(0.02 * 0.04)).epsilon(1e-14));
        CHECK_THROWS_AS((void)hjm_coeffs_cir(p, -0.01, 1.0), std::domain_error);

        // closed-form integral of the volatility is sqrt(alpha x) * -Psi
        const double x = 0.03;
        for (double tau : {0.5, 2.0, 10.0, 30.0}) {
            auto [drift, vol] = hjm_coeffs_cir(p, x, tau);
            const double int_vol = -std::sqrt(p.alpha * x) * cir_riccati(p, tau).psi;
            CHECK(std::abs(drift - vol * int_vol) < 1e-10);
        }
    }
}

TEST_CASE("h_operator") {
    const double delta = 0.01;
    const TimeGrid grid(delta, 401);

    SUBCASE("zero extension, zero factor") {
        HullWhiteExtension theta{grid, std::vector<double>(grid.count, 0.0)};
        const VasicekParams p(0.02, -0.8);
        const ForwardCurve fc = h_operator(p, theta, 0.0);
        for (std::size_t n = 0; n < grid.count; n += 40) {
            const double psi = vasicek_riccati(p, grid.time(n)).psi;
            CHECK(fc.values[n] == doctest::Approx(-0.5 * p.a * psi * psi).epsilon(1e-12));
        }
        const CirParams c(0.02, -0.8);
        const ForwardCurve fz = h_operator(ModelParams(c), theta, 0.0);
        for (double v : fz.values) CHECK(v == 0.0);
    }

    SUBCASE("constant extension closed form") {
        const VasicekParams p(0.01, -0.5);
        const double cval = 0.012;
        HullWhiteExtension theta{grid, std::vector<double>(grid.count, cval)};
        const ForwardCurve fc = h_operator(p, theta, 0.0);
        for (std::size_t n = 0; n < grid.count; n += 25) {
            const double tau = grid.time(n);
            const double psi = vasicek_riccati(p, tau).psi;
            const double exact = cval * std::expm1(p.beta * tau) / p.beta - 0.5 * p.a * psi * psi;
            CHECK(fc.values[n] == doctest::Approx(exact).epsilon(1e-7));
        }
    }

    SUBCASE("short end equals the factor exactly") {
        HullWhiteExtension theta{grid, std::vector<double>(grid.count, 0.007)};
        for (double x : {0.0, 0.013, 0.05}) {
            const ForwardCurve fv = h_operator(VasicekParams(0.01, -1.2), theta, x);
            CHECK(fv.values[0] == x);
            const ForwardCurve fcir = h_operator(CirParams(0.04, -1.2), theta, x);
            CHECK(fcir.values[0] == x);
        }
    }

    SUBCASE("deriv_values match finite differences of values") {
        HullWhiteExtension theta{grid, {}};
        theta.values.resize(grid.count);
        for (std::size_t n = 0; n < grid.count; ++n) {
            theta.values[n] = 0.01 + 0.003 * std::sin(grid.time(n));
        }
        const ForwardCurve fc = h_operator(CirParams(0.03, -0.6), theta, 0.02);
        for (std::size_t n = 1; n + 1 < grid.count; n += 37) {
            const double fd = (fc.values[n + 1] - fc.values[n - 1]) / (2.0 * delta);
            CHECK(fc.deriv_values[n] == doctest::Approx(fd).epsilon(5e-4));
        }
    }
}

TEST_CASE("bond_price_affine") {
    const double delta = 1.0 / 240.0;
    const TimeGrid grid(delta, 1201);
    HullWhiteExtension theta{grid, {}};
    theta.values.resize(grid.count);
    for (std::size_t n = 0; n < grid.count; ++n) {
        theta.values[n] = 0.008 + 0.002 * std::cos(0.7 * grid.time(n));
    }
    const VasicekParams p(0.01, -0.9);
    const double x = 0.017;

    SUBCASE("T = t gives unity") {
        CHECK(bond_price_affine(ModelParams(p), theta, x, 0.5, 0.5) == 1.0);
    }
    SUBCASE("ordering error") {
        CHECK_THROWS_AS((void)bond_price_affine(ModelParams(p), theta, x, 1.0, 0.5),
                        std::invalid_argument);
    }
    SUBCASE("matches exp(-integral h) with h from h_operator") {
        const ForwardCurve fc = h_operator(ModelParams(p), theta, x);
        for (double T : {1.0, 3.0, 4.8}) {
            const double direct = bond_price_from_forwards(fc, T);
            const double affine = bond_price_affine(ModelParams(p), theta, x, 0.0, T);
            CHECK(affine == doctest::Approx(direct).epsilon(1e-7));
        }
    }
    SUBCASE("same identity for CIR") {
        const CirParams c(0.03, -0.7);
        // admissible nonnegative extension
        const ForwardCurve fc = h_operator(ModelParams(c), theta, x);
        for (double T : {1.0, 2.5}) {
            const double direct = bond_price_from_forwards(fc, T);
            const double affine = bond_price_affine(ModelParams(c), theta, x, 0.0, T);
            CHECK(affine == doctest::Approx(direct).epsilon(1e-7));
        }
    }
}

TEST_SUITE_END();
