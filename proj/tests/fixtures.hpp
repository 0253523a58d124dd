#pragma once

// Shared fixtures for unit and acceptance tests.

#include <cmath>
#include <vector>

#include "crc/affine.hpp"
#include "crc/curves.hpp"

namespace fixtures {

// Analytic extension theta*(s) = c0 + c1 s + c2 sin(w s) together with the
// exact image g = I(theta*) under the Vasicek kernel Psi'(t-s) = -e^{b(t-s)},
// obtained by symbolic integration. Drives the solver convergence checks.
struct VolterraFixture {
    double b = -0.8;  // beta
    double c0 = 0.012;
    double c1 = 0.004;
    double c2 = 0.006;
    double w = 1.3;

    double theta(double s) const { return c0 + c1 * s + c2 * std::sin(w * s); }

    double g(double tau) const {
        // A = int (c0 + c1 s) e^{-b s} ds, B = int sin(w s) e^{-b s} ds over [0, tau]
        const double A = (c0 / b + c1 / (b * b)) -
                         std::exp(-b * tau) * ((c0 + c1 * tau) / b + c1 / (b * b));
        const double B = (std::exp(-b * tau) * (-b * std::sin(w * tau) - w * std::cos(w * tau)) +
                          w) /
                         (b * b + w * w);
        return -std::exp(b * tau) * (A + c2 * B);
    }

    double g_prime0() const { return -theta(0.0); }
};

// 33-maturity synthetic market curve in the usual 3m..30y layout.
inline crc::YieldCurve synthetic_market_yields() {
    crc::YieldCurve yc;
    for (double tau : {0.25, 0.5, 0.75, 1.0}) yc.maturities.push_back(tau);
    for (int y = 2; y <= 30; ++y) yc.maturities.push_back(static_cast<double>(y));
    for (double tau : yc.maturities) {
        yc.yields.push_back(0.015 + 0.012 * (1.0 - std::exp(-tau / 3.0)) -
                            0.004 * std::exp(-tau / 8.0));
    }
    return yc;
}

}  // namespace fixtures
