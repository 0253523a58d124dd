#pragma once

#include <utility>
#include <variant>

#include "crc/curves.hpp"
#include "crc/volterra_types.hpp"

namespace crc {

// One-factor Vasicek factor coefficients: dr = (theta(t) + beta r) dt + sqrt(a) dW
struct VasicekParams {
    double a;     // volatility level, >= 0 (rate^2 / year)
    double beta;  // mean reversion speed, < 0 (1/year)

    VasicekParams(double a_, double beta_);
};

// One-factor CIR factor coefficients: dr = (theta(t) + beta r) dt + sqrt(alpha r) dW
struct CirParams {
    double alpha;  // volatility coefficient, > 0 (1/year)
    double beta;   // mean reversion speed, < 0 (1/year)
    double gamma;  // derived: sqrt(beta^2 + 2 alpha)

    CirParams(double alpha_, double beta_);
};

using ModelParams = std::variant<VasicekParams, CirParams>;

// Riccati solution values at one time: Phi(t), Psi(t) and the Psi derivatives
// the stepping algorithms consume. Conventions: l = 0, lambda = 1, so
// Phi(0) = Psi(0) = 0 and Psi'(0) = -1.
struct RiccatiPair {
    double phi;
    double psi;
    double psi_prime;
    double psi_second;
};

// Closed forms:
//   Phi(t)  = a/(4 b^3) (2 b t - 4 e^{bt} + 3 + e^{2bt})
//   Psi(t)  = (1 - e^{bt})/b,  Psi' = -e^{bt},  Psi'' = -b e^{bt}
RiccatiPair vasicek_riccati(const VasicekParams& p, double t);

// Closed forms (gamma = sqrt(b^2 + 2 alpha), w = e^{-gamma t}):
//   Phi = 0
//   Psi(t)  = -2 (1 - w) / (gamma (1 + w) - b (1 - w))
//   Psi'(t) = -2 gamma / D + 2 gamma (1 - w)(gamma - b) / D^2 with D as above
//             (the printed two-term kernel, rescaled by e^{-gamma t} for stability)
//   Psi''   = (alpha Psi + b) Psi'   (differentiating Psi' = alpha/2 Psi^2 + b Psi - 1)
RiccatiPair cir_riccati(const CirParams& p, double t);

// HJM drift/volatility of the Hull-White extended models.
// Vasicek: (-(a/b) e^{b tau} (1 - e^{b tau}), sqrt(a) e^{b tau})
std::pair<double, double> hjm_coeffs_vasicek(const VasicekParams& p, double tau);
// CIR: (Psi'(tau) Psi(tau) alpha x, -sqrt(alpha x) Psi'(tau)); x >= 0 required
std::pair<double, double> hjm_coeffs_cir(const CirParams& p, double x, double tau);

// Forward curve implied by an extension theta and factor value x:
//   h(tau) = -I(theta)(tau) - Phi'(tau) - Psi'(tau) x
// with I the Volterra operator with kernel Psi'(tau - s), discretised by the
// trapezoid rule on theta's grid. deriv_values use the differentiated kernel:
//   dh(tau) = -(theta(tau) Psi'(0) + I_{Psi''}(theta)(tau)) - Phi''(tau) - Psi''(tau) x.
// h(0) = x holds exactly.
ForwardCurve h_operator(const ModelParams& p, const HullWhiteExtension& theta, double x);

// log P = -l (T-t) + int_0^{T-t} theta(s) Psi(T-t-s) ds + Phi(T-t) + Psi(T-t) x,
// trapezoid over theta's grid (theta is the extension prevailing at t).
double bond_price_affine(const ModelParams& p, const HullWhiteExtension& theta, double x,
                         double t, double T);

// Riccati right-hand sides F(u), R(u); exposed for residual checks.
double riccati_F(const ModelParams& p, double u);
double riccati_R(const ModelParams& p, double u);
RiccatiPair riccati(const ModelParams& p, double t);

}  // namespace crc
