#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "crc/affine.hpp"
#include "crc/rng.hpp"

namespace crc {

enum class ModelKind { Vasicek, Cir };

// Raised when a calibrated CIR extension head is negative; the simulation
// driver catches it per path and records the rejection.
class AdmissibilityError : public std::runtime_error {
  public:
    AdmissibilityError(double t_, double theta0_, double theta_delta_);
    double t;
    double theta0;
    double theta_delta;
};

// Current affine coefficients implied by the parameter state.
// vol is a (Vasicek) or alpha (CIR); beta is the mean reversion speed (< 0).
struct ModelCoeffs {
    double vol;
    double beta;
};

// Law of the parameter process Y together with its mapping to (vol, beta).
//   Constant:  (vol0, beta0) forever
//   Ramp:      vol(t) = vol0 * (1 + 3 t), beta fixed (volatility ramp that
//              doubles the short-rate noise level over one year)
//   CirVol:    vol = Y with dY = (m + mu Y) dt + sigma sqrt(Y) dWt, Y(0) = vol0
//   GbmPair:   -beta and vol follow independent geometric Brownian motions
//              started at (-beta0, vol0), so beta stays negative
struct ParamProcessSpec {
    enum class Kind { Constant, Ramp, CirVol, GbmPair };

    Kind kind = Kind::Constant;
    double vol0 = 0.0;
    double beta0 = -1.0;
    // CirVol coefficients (m >= 0, mu <= 0, sigma >= 0)
    double m = 0.0, mu = 0.0, sigma = 0.0;
    // GbmPair coefficients: component 1 drives -beta, component 2 drives vol
    double mu1 = 0.0, sigma1 = 0.0, mu2 = 0.0, sigma2 = 0.0;

    void validate() const;

    // draws consumed by one param_step, useful for stream replay
    int draws_per_step() const;
};

using ParamState = std::array<double, 2>;  // {-beta, vol} for GbmPair; {unused, vol} otherwise

ParamState param_initial_state(const ParamProcessSpec& spec);
ModelCoeffs param_coeffs(const ParamProcessSpec& spec, const ParamState& y, double t);

// Advance Y over [t, t+delta]. Constant/Ramp are deterministic; CirVol takes
// one second-order square-root-process step; GbmPair does the exact lognormal
// update with two independent normals.
ParamState param_step(const ParamProcessSpec& spec, const ParamState& y, double t,
                      double delta, RngStream& rng);

// Exact Gaussian transition of the Hull-White extended Vasicek short rate:
//   r' ~ N(e^{beta delta} r - i_theta_delta, a (e^{2 beta delta} - 1)/(2 beta))
// where i_theta_delta is the discretised Volterra increment I(theta)(delta).
double vasicek_step_exact(double r, const VasicekParams& p, double i_theta_delta,
                          double delta, RngStream& rng);

// One weak-second-order, positivity-preserving step of
//   dX = (a - k X) dt + sigma sqrt(X) dW,  a >= 0, k >= 0,
// combining the exact square-root split flow with a three-point variate above
// the threshold and a two-point moment match below it. u is one (0,1) uniform.
double cir_weak2_step(double x, double a, double k, double sigma, double dt, double u);

// Second-order step of dr = (theta(t) + beta r) dt + sqrt(alpha r) dW with
// theta linear between theta0 and theta_delta over the step: Strang splitting
// drift-half / homogeneous CIR / drift-half. Consumes one uniform.
double cir_step_order2(double r, const CirParams& p, double theta0, double theta_delta,
                       double delta, RngStream& rng);
double cir_step_order2_with(double r, const CirParams& p, double theta0, double theta_delta,
                            double delta, double u);

}  // namespace crc
