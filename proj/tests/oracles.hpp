#pragma once

// Test-only reference implementations. These stay independent of the closed
// forms and schemes they guard: brute-force ODE integration, adaptive
// quadrature, and exact transition moments.

#include <cmath>
#include <functional>
#include <utility>

#include "crc/curves.hpp"

namespace oracles {

struct RiccatiTrace {
    double phi = 0.0;
    double psi = 0.0;
};

// RK4 integration of Psi' = R(Psi) - 1, Phi' = F(Psi) with zero initial data.
template <class Ffn, class Rfn>
RiccatiTrace integrate_riccati(Ffn F, Rfn R, double t, double step) {
    RiccatiTrace s;
    const auto n = static_cast<long>(std::ceil(t / step));
    if (n == 0) return s;
    const double h = t / static_cast<double>(n);
    auto fpsi = [&](double psi) { return R(psi) - 1.0; };
    for (long i = 0; i < n; ++i) {
        const double k1p = fpsi(s.psi);
        const double k1f = F(s.psi);
        const double k2p = fpsi(s.psi + 0.5 * h * k1p);
        const double k2f = F(s.psi + 0.5 * h * k1p);
        const double k3p = fpsi(s.psi + 0.5 * h * k2p);
        const double k3f = F(s.psi + 0.5 * h * k2p);
        const double k4p = fpsi(s.psi + h * k3p);
        const double k4f = F(s.psi + h * k3p);
        s.phi += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        s.psi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    return s;
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Smooth analytic forward curve with exact derivative values, used to build
// ForwardCurve fixtures without interpolation error.
struct AnalyticCurve {
    double b0 = 0.02;
    double b1 = -0.01;
    double b2 = 0.015;
    double tau0 = 2.0;

    double value(double tau) const {
        return b0 + (b1 + b2 * tau) * std::exp(-tau / tau0);
    }
    double deriv(double tau) const {
        return (b2 - (b1 + b2 * tau) / tau0) * std::exp(-tau / tau0);
    }
    crc::ForwardCurve sample(const crc::TimeGrid& grid) const {
        crc::ForwardCurve fc;
        fc.grid = grid;
        fc.values.resize(grid.count);
        fc.deriv_values.resize(grid.count);
        for (std::size_t n = 0; n < grid.count; ++n) {
            fc.values[n] = value(grid.time(n));
            fc.deriv_values[n] = deriv(grid.time(n));
        }
        return fc;
    }
};

inline crc::ForwardCurve flat_curve(double level, const crc::TimeGrid& grid) {
    crc::ForwardCurve fc;
    fc.grid = grid;
    fc.values.assign(grid.count, level);
    fc.deriv_values.assign(grid.count, 0.0);
    return fc;
}

// Exact conditional moments of the homogeneous square-root process
// dX = (a - k X) dt + sigma sqrt(X) dW.
inline std::pair<double, double> cir_exact_moments(double x, double a, double k, double sigma,
                                                   double t) {
    const double e = std::exp(-k * t);
    const double psi = (k == 0.0) ? t : (1.0 - e) / k;
    const double mean = x * e + a * psi;
    const double var = sigma * sigma * psi * (x * e + 0.5 * a * psi);
    return {mean, mean * mean + var};  // (first moment, second moment)
}

// RK4 oracle for the first two moments of dr = (thetabar(t) + beta r) dt +
// sqrt(alpha r) dW with thetabar linear between theta0 and theta1 on [0, dt]:
//   m'  = thetabar + beta m
//   q'  = 2 thetabar m + 2 beta q + alpha m
inline std::pair<double, double> cir_drift_moments_oracle(double r0, double alpha, double beta,
                                                          double theta0, double theta1, double dt,
                                                          int steps = 20000) {
    double m = r0;
    double q = r0 * r0;
    const double h = dt / steps;
    auto th = [&](double s) { return theta0 + (theta1 - theta0) * s / dt; };
    auto fm = [&](double s, double mv) { return th(s) + beta * mv; };
    auto fq = [&](double s, double mv, double qv) {
        return 2.0 * th(s) * mv + 2.0 * beta * qv + alpha * mv;
    };
    for (int i = 0; i < steps; ++i) {
        const double s = i * h;
        const double k1m = fm(s, m);
        const double k1q = fq(s, m, q);
        const double k2m = fm(s + 0.5 * h, m + 0.5 * h * k1m);
        const double k2q = fq(s + 0.5 * h, m + 0.5 * h * k1m, q + 0.5 * h * k1q);
        const double k3m = fm(s + 0.5 * h, m + 0.5 * h * k2m);
        const double k3q = fq(s + 0.5 * h, m + 0.5 * h * k2m, q + 0.5 * h * k2q);
        const double k4m = fm(s + h, m + h * k3m);
        const double k4q = fq(s + h, m + h * k3m, q + h * k3q);
        m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    }
    return {m, q};
}

}  // namespace oracles
