#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "crc/engine.hpp"

namespace crc {

// xi(t) = int_0^t E[Y(s)] e^{2 beta (t-s)} ds for the volatility parameter
// process dY = (m + mu Y) dt + sigma sqrt(Y) dW, Y(0) = y0 (sigma drops out
// of the expectation). Two branches, mu < 0 and mu = 0, continuous at 0.
double xi_deterministic(double t, double y0, double m, double mu, double beta);

// Law of r(t) in the Vasicek model with stochastic volatility level Y:
//   mean     = e^{beta t} r(0) + int_0^t e^{beta (t-s)} (h0'(s) - beta h0(s) + xi(s)) ds
//   variance = Y0/(2 beta)(e^{2 beta t} - 1) + m/(4 beta^2)(-2 beta t + e^{2 beta t} - 1)
// p.a plays Y0. The variance formula applies to the deterministic-Y family;
// the mean is exact for any sigma since E[Y] is unaffected by it.
// Quadrature: trapezoid on h0's grid.
std::pair<double, double> short_rate_law(double t, const ForwardCurve& h0,
                                         const VasicekParams& p, double m, double mu);

// Closed-form moment generating function E[e^{eta r(t)}] of the Vasicek model
// with the deterministic volatility ramp a(t) = a0 (1 + 3t).
double mgf_ramp_exact(double eta, double t, const ForwardCurve& h0, double a0, double beta0);

struct McValue {
    double value = 0.0;
    double se = 0.0;       // NaN when undefined (single path)
    std::size_t n = 0;     // surviving paths
};

// Sample mean and standard error of e^{eta r(t)} over surviving paths.
McValue mc_mgf(const PathEnsemble& ensemble, double eta, double t);

struct MomentReport {
    double mean = 0.0, sd = 0.0, skewness = 0.0, excess_kurtosis = 0.0;
    double se_mean = 0.0, se_sd = 0.0, se_skewness = 0.0, se_excess_kurtosis = 0.0;
    std::size_t n = 0;
    std::size_t blocks = 0;
    bool higher_moments_defined = true;  // false for degenerate (zero variance) samples
};

// Terminal moments with delete-a-block jackknife standard errors.
MomentReport mc_moments(const PathEnsemble& ensemble, double t, std::size_t blocks = 1000);

struct ConvergenceReport {
    std::vector<double> deltas;
    std::vector<double> errors;
    std::vector<double> ses;
    std::vector<bool> excluded;       // below the MC noise floor, left out of the fit
    double slope = 0.0;
    double slope_intercept = 0.0;     // intercept of the log-log fit
    double extrapolated_truth = 0.0;  // intercept of the linear-in-delta fit (no-oracle mode)
    bool used_oracle = false;
    bool slope_reliable = false;      // at least three points survived exclusion
};

struct ConvergenceOptions {
    std::vector<double> deltas;       // strictly decreasing, >= 3 entries
    double eta = 20.0;
    double t = 1.0;
    std::optional<double> oracle;     // closed-form MGF value when available
    double noise_floor_mult = 3.0;    // |error| <= mult * SE counts as noise floor
    // Couple each path's scheme draw sequence to an exact-law Gaussian copy and
    // estimate the MGF as oracle + mean(e^{eta r} - e^{eta r_exact}); unbiased
    // for the scheme MGF with variance O(delta^2). Vasicek ramp runs only;
    // requires exact_mean (the mean backing the oracle value).
    bool coupled_control_variate = false;
    std::optional<double> exact_mean;
};

// Runs the simulation per delta (make_cfg supplies a full SimConfig for each
// delta, same seed for common random numbers) and fits the log-log error
// slope against its oracle or the linear-extrapolated intercept.
ConvergenceReport convergence_study(const std::function<SimConfig(double)>& make_cfg,
                                    const ConvergenceOptions& opt);

// Least-squares line through (x, y); returns {slope, intercept}.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace crc
