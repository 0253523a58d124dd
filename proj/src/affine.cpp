#include "crc/affine.hpp"

#include <cmath>
#include <stdexcept>

namespace crc {

VasicekParams::VasicekParams(double a_, double beta_) : a(a_), beta(beta_) {
    if (!(a >= 0.0)) throw std::invalid_argument("VasicekParams: a must be >= 0");
    if (!(beta < 0.0)) throw std::invalid_argument("VasicekParams: beta must be < 0");
}

CirParams::CirParams(double alpha_, double beta_)
    : alpha(alpha_), beta(beta_), gamma(std::sqrt(beta_ * beta_ + 2.0 * alpha_)) {
    if (!(alpha > 0.0)) throw std::invalid_argument("CirParams: alpha must be > 0");
    if (!(beta < 0.0)) throw std::invalid_argument("CirParams: beta must be < 0");
}

RiccatiPair vasicek_riccati(const VasicekParams& p, double t) {
    if (t < 0.0) throw std::domain_error("vasicek_riccati: t must be >= 0");
    const double b = p.beta;
    const double u = std::expm1(b * t);        // e^{bt} - 1
    const double v = std::expm1(2.0 * b * t);  // e^{2bt} - 1
    const double ebt = u + 1.0;
    RiccatiPair r;
    // 2bt - 4e^{bt} + 3 + e^{2bt} written via expm1 to avoid cancellation at small t
    r.phi = p.a / (4.0 * b * b * b) * (2.0 * b * t - 4.0 * u + v);
    r.psi = -u / b;
    r.psi_prime = -ebt;
    r.psi_second = -b * ebt;
    return r;
}

RiccatiPair cir_riccati(const CirParams& p, double t) {
    if (t < 0.0) throw std::domain_error("cir_riccati: t must be >= 0");
    const double g = p.gamma;
    const double b = p.beta;
    const double w = std::exp(-g * t);
    const double one_minus_w = -std::expm1(-g * t);
    const double denom = g * (1.0 + w) - b * one_minus_w;
    RiccatiPair r;
    r.phi = 0.0;
    r.psi = -2.0 * one_minus_w / denom;
    r.psi_prime = -2.0 * g / denom + 2.0 * g * one_minus_w * (g - b) / (denom * denom);
    r.psi_second = (p.alpha * r.psi + b) * r.psi_prime;
    return r;
}

RiccatiPair riccati(const ModelParams& p, double t) {
    if (const auto* v = std::get_if<VasicekParams>(&p)) return vasicek_riccati(*v, t);
    return cir_riccati(std::get<CirParams>(p), t);
}

double riccati_F(const ModelParams& p, double u) {
    if (const auto* v = std::get_if<VasicekParams>(&p)) return 0.5 * v->a * u * u;
    (void)u;
    return 0.0;
}

double riccati_R(const ModelParams& p, double u) {
    if (const auto* v = std::get_if<VasicekParams>(&p)) return v->beta * u;
    const auto& c = std::get<CirParams>(p);
    return 0.5 * c.alpha * u * u + c.beta * u;
}

std::pair<double, double> hjm_coeffs_vasicek(const VasicekParams& p, double tau) {
    if (tau < 0.0) throw std::domain_error("hjm_coeffs_vasicek: tau must be >= 0");
    const double e = std::exp(p.beta * tau);
    return {-(p.a / p.beta) * e * (1.0 - e), std::sqrt(p.a) * e};
}

std::pair<double, double> hjm_coeffs_cir(const CirParams& p, double x, double tau) {
    if (x < 0.0) throw std::domain_error("hjm_coeffs_cir: factor must be >= 0");
    if (tau < 0.0) throw std::domain_error("hjm_coeffs_cir: tau must be >= 0");
    const RiccatiPair r = cir_riccati(p, tau);
    return {r.psi_prime * r.psi * p.alpha * x, -std::sqrt(p.alpha * x) * r.psi_prime};
}

namespace {

// Phi'(tau) = F(Psi(tau)), Phi''(tau) = F'(Psi) Psi'
double phi_prime(const ModelParams& p, const RiccatiPair& r) {
    if (const auto* v = std::get_if<VasicekParams>(&p)) return 0.5 * v->a * r.psi * r.psi;
    return 0.0;
}

double phi_second(const ModelParams& p, const RiccatiPair& r) {
    if (const auto* v = std::get_if<VasicekParams>(&p)) return v->a * r.psi * r.psi_prime;
    return 0.0;
}

}  // namespace

ForwardCurve h_operator(const ModelParams& p, const HullWhiteExtension& theta, double x) {
    theta.validate();
    if (std::holds_alternative<CirParams>(p) && x < 0.0) {
        throw std::domain_error("h_operator: CIR factor must be >= 0");
    }
    const TimeGrid& grid = theta.grid;
    const double delta = grid.step;
    const std::size_t n = grid.count;

    std::vector<RiccatiPair> rc(n);
    for (std::size_t i = 0; i < n; ++i) rc[i] = riccati(p, grid.time(i));

    ForwardCurve fc;
    fc.grid = grid;
    fc.values.resize(n);
    fc.deriv_values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        // trapezoid of int_0^{tau_k} theta(s) K(tau_k - s) ds for K = Psi' and Psi''
        double acc1 = 0.0, acc2 = 0.0;
        if (k > 0) {
            acc1 = 0.5 * (rc[k].psi_prime * theta.values[0] + rc[0].psi_prime * theta.values[k]);
            acc2 = 0.5 * (rc[k].psi_second * theta.values[0] + rc[0].psi_second * theta.values[k]);
            for (std::size_t i = 1; i < k; ++i) {
                acc1 += rc[k - i].psi_prime * theta.values[i];
                acc2 += rc[k - i].psi_second * theta.values[i];
            }
            acc1 *= delta;
            acc2 *= delta;
        }
        fc.values[k] = -acc1 - phi_prime(p, rc[k]) - rc[k].psi_prime * x;
        // d/dtau I(theta) = theta(tau) Psi'(0) + int theta Psi''(tau - s) ds
        const double dI = theta.values[k] * rc[0].psi_prime + acc2;
        fc.deriv_values[k] = -dI - phi_second(p, rc[k]) - rc[k].psi_second * x;
    }
    return fc;
}

double bond_price_affine(const ModelParams& p, const HullWhiteExtension& theta, double x,
                         double t, double T) {
    theta.validate();
    if (T < t) throw std::invalid_argument("bond_price_affine: T must be >= t");
    const double span = T - t;
    if (span > theta.grid.max_time() + 1e-12) {
        throw std::out_of_range("bond_price_affine: theta does not cover [0, T-t]");
    }
    if (span <= 0.0) return 1.0;

    const double delta = theta.grid.step;
    const std::size_t full = std::min(static_cast<std::size_t>(span / delta),
                                      theta.grid.count - 1);
    // trapezoid of int_0^{span} theta(s) Psi(span - s) ds, fractional tail interpolated
    double acc = 0.0;
    double prev_val = theta.values[0] * riccati(p, span).psi;
    for (std::size_t i = 1; i <= full; ++i) {
        const double cur = theta.values[i] * riccati(p, span - theta.grid.time(i)).psi;
        acc += 0.5 * (prev_val + cur) * delta;
        prev_val = cur;
    }
    const double rest = span - static_cast<double>(full) * delta;
    if (rest > 1e-14 && full + 1 < theta.grid.count) {
        const double w = rest / delta;
        const double th_end = theta.values[full] * (1.0 - w) + theta.values[full + 1] * w;
        acc += 0.5 * (prev_val + th_end * riccati(p, 0.0).psi) * rest;
    }
    const RiccatiPair end = riccati(p, span);
    return std::exp(acc + end.phi + end.psi * x);
}

}  // namespace crc
