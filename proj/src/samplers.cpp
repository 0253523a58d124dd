#include "crc/samplers.hpp"

#include <cmath>

namespace crc {

namespace {

std::string admissibility_message(double t, double theta0, double theta_delta) {
    return "calibrated CIR extension is negative at t=" + std::to_string(t) +
           " (theta(0)=" + std::to_string(theta0) +
           ", theta(delta)=" + std::to_string(theta_delta) + ")";
}

double psi_of_k(double k, double t) {
    // (1 - e^{-kt})/k, continuous at k = 0
    if (k == 0.0) return t;
    return -std::expm1(-k * t) / k;
}

}  // namespace

AdmissibilityError::AdmissibilityError(double t_, double theta0_, double theta_delta_)
    : std::runtime_error(admissibility_message(t_, theta0_, theta_delta_)),
      t(t_),
      theta0(theta0_),
      theta_delta(theta_delta_) {}

void ParamProcessSpec::validate() const {
    if (!(vol0 >= 0.0)) throw std::invalid_argument("ParamProcessSpec: vol0 must be >= 0");
    if (!(beta0 < 0.0)) throw std::invalid_argument("ParamProcessSpec: beta0 must be < 0");
    switch (kind) {
        case Kind::CirVol:
            if (m < 0.0 || mu > 0.0 || sigma < 0.0) {
                throw std::invalid_argument(
                    "ParamProcessSpec: CirVol needs m >= 0, mu <= 0, sigma >= 0");
            }
            break;
        case Kind::GbmPair:
            if (sigma1 < 0.0 || sigma2 < 0.0) {
                throw std::invalid_argument("ParamProcessSpec: GBM volatilities must be >= 0");
            }
            break;
        default:
            break;
    }
}

int ParamProcessSpec::draws_per_step() const {
    switch (kind) {
        case Kind::Constant:
        case Kind::Ramp:
            return 0;
        case Kind::CirVol:
            return 1;
        case Kind::GbmPair:
            return 2;
    }
    return 0;
}

ParamState param_initial_state(const ParamProcessSpec& spec) {
    return {-spec.beta0, spec.vol0};
}

ModelCoeffs param_coeffs(const ParamProcessSpec& spec, const ParamState& y, double t) {
    switch (spec.kind) {
        case ParamProcessSpec::Kind::Constant:
            return {spec.vol0, spec.beta0};
        case ParamProcessSpec::Kind::Ramp:
            return {spec.vol0 * (1.0 + 3.0 * t), spec.beta0};
        case ParamProcessSpec::Kind::CirVol:
            return {y[1], spec.beta0};
        case ParamProcessSpec::Kind::GbmPair:
            return {y[1], -y[0]};
    }
    return {spec.vol0, spec.beta0};
}

ParamState param_step(const ParamProcessSpec& spec, const ParamState& y, double t,
                      double delta, RngStream& rng) {
    if (!(delta > 0.0)) throw std::invalid_argument("param_step: delta must be positive");
    switch (spec.kind) {
        case ParamProcessSpec::Kind::Constant:
            return y;
        case ParamProcessSpec::Kind::Ramp: {
            ParamState out = y;
            out[1] = spec.vol0 * (1.0 + 3.0 * (t + delta));
            return out;
        }
        case ParamProcessSpec::Kind::CirVol: {
            ParamState out = y;
            out[1] = cir_weak2_step(y[1], spec.m, -spec.mu, spec.sigma, delta,
                                    rng.next_uniform());
            return out;
        }
        case ParamProcessSpec::Kind::GbmPair: {
            const double z1 = rng.next_normal();
            const double z2 = rng.next_normal();
            const double sd = std::sqrt(delta);
            ParamState out;
            out[0] = y[0] * std::exp((spec.mu1 - 0.5 * spec.sigma1 * spec.sigma1) * delta +
                                     spec.sigma1 * sd * z1);
            out[1] = y[1] * std::exp((spec.mu2 - 0.5 * spec.sigma2 * spec.sigma2) * delta +
                                     spec.sigma2 * sd * z2);
            return out;
        }
    }
    return y;
}

double vasicek_step_exact(double r, const VasicekParams& p, double i_theta_delta,
                          double delta, RngStream& rng) {
    if (!(delta > 0.0)) throw std::invalid_argument("vasicek_step_exact: delta must be positive");
    const double e = std::exp(p.beta * delta);
    const double mean = e * r - i_theta_delta;
    const double var = p.a * std::expm1(2.0 * p.beta * delta) / (2.0 * p.beta);
    if (var <= 0.0) return mean;  // a = 0
    return mean + std::sqrt(var) * rng.next_normal();
}

double cir_weak2_step(double x, double a, double k, double sigma, double dt, double u) {
    if (x < 0.0) throw std::domain_error("cir_weak2_step: state must be >= 0");
    if (sigma == 0.0) {
        // deterministic linear flow
        return x * std::exp(-k * dt) + a * psi_of_k(k, dt);
    }
    const double w = a - 0.25 * sigma * sigma;
    const double psi_half = psi_of_k(k, 0.5 * dt);
    const double e_half = std::exp(-0.5 * k * dt);

    double threshold = 0.0;
    if (w < 0.0) {
        const double z = -w * psi_half;
        const double s = 0.5 * sigma * std::sqrt(3.0 * dt) + std::sqrt(z / e_half);
        threshold = (z + s * s) / e_half;
    }

    if (x >= threshold) {
        static const double sqrt3 = 1.7320508075688772;
        const double y3 = (u < 1.0 / 6.0) ? -sqrt3 : (u < 5.0 / 6.0 ? 0.0 : sqrt3);
        const double inner = w * psi_half + e_half * x;
        const double root = std::sqrt(inner) + 0.5 * sigma * std::sqrt(dt) * y3;
        return e_half * root * root + w * psi_half;
    }

    // near the boundary: two-point variate matching the exact first two moments
    const double e_full = std::exp(-k * dt);
    const double psi_full = psi_of_k(k, dt);
    const double m1 = x * e_full + a * psi_full;
    if (m1 <= 0.0) return 0.0;
    const double var = sigma * sigma * psi_full * (x * e_full + 0.5 * a * psi_full);
    const double m2 = m1 * m1 + var;
    const double disc = std::max(0.0, 1.0 - m1 * m1 / m2);
    const double pi = 0.5 * (1.0 - std::sqrt(disc));
    return (u < pi) ? m1 / (2.0 * pi) : m1 / (2.0 * (1.0 - pi));
}

double cir_step_order2_with(double r, const CirParams& p, double theta0, double theta_delta,
                            double delta, double u) {
    if (r < 0.0 || theta0 < 0.0 || theta_delta < 0.0) {
        throw AdmissibilityError(0.0, theta0, theta_delta);
    }
    // exact half flows of dr = thetabar(t) dt with thetabar linear on [0,delta]
    const double first_half = delta * (3.0 * theta0 + theta_delta) / 8.0;
    const double second_half = delta * (theta0 + 3.0 * theta_delta) / 8.0;
    double x = r + first_half;
    x = cir_weak2_step(x, 0.0, -p.beta, std::sqrt(p.alpha), delta, u);
    return x + second_half;
}

double cir_step_order2(double r, const CirParams& p, double theta0, double theta_delta,
                       double delta, RngStream& rng) {
    return cir_step_order2_with(r, p, theta0, theta_delta, delta, rng.next_uniform());
}

}  // namespace crc
