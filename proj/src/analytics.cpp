#include "crc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double xi_deterministic(double t, double y0, double m, double mu, double beta) {
    if (mu > 0.0) throw std::domain_error("xi_deterministic: mu must be <= 0");
    if (!(beta < 0.0)) throw std::domain_error("xi_deterministic: beta must be < 0");
    if (t < 0.0) throw std::domain_error("xi_deterministic: t must be >= 0");
    const double e2b = std::exp(2.0 * beta * t);
    if (std::abs(2.0 * beta - mu) < 1e-7 * std::abs(beta)) {
        // resonant case mu = 2 beta (removable singularity of the generic branch)
        return (y0 + m / (2.0 * beta)) * t * e2b - m * (e2b - 1.0) / (4.0 * beta * beta);
    }
    if (mu < -1e-10) {
        const double emu = std::exp(mu * t);
        return y0 * (e2b - emu) / (2.0 * beta - mu) +
               m * (2.0 * beta - mu - 2.0 * beta * emu + mu * e2b) /
                   (2.0 * beta * mu * (2.0 * beta - mu));
    }
    // mu = 0 branch (also used for tiny mu to avoid cancellation)
    return y0 * (e2b - 1.0) / (2.0 * beta) + m * (e2b - 2.0 * beta * t - 1.0) / (4.0 * beta * beta);
}

namespace {

// trapezoid of e^{beta (t-s)} (h0'(s) - beta h0(s) + xi(s)) over [0, t] on h0's grid
double mean_integral(double t, const ForwardCurve& h0, double beta, double y0, double m,
                     double mu) {
    const double step = h0.grid.step;
    const double pos = t / step;
    const auto full = static_cast<std::size_t>(pos + 1e-9);
    if (full + 1 > h0.grid.count) {
        throw std::out_of_range("short_rate_law: t beyond curve coverage");
    }
    auto integrand = [&](std::size_t k) {
        const double s = h0.grid.time(k);
        return std::exp(beta * (t - s)) *
               (h0.deriv_values[k] - beta * h0.values[k] + xi_deterministic(s, y0, m, mu, beta));
    };
    double acc = 0.0;
    double prev = integrand(0);
    for (std::size_t k = 1; k <= full; ++k) {
        const double cur = integrand(k);
        acc += 0.5 * (prev + cur) * step;
        prev = cur;
    }
    const double rest = t - static_cast<double>(full) * step;
    if (rest > 1e-12 && full + 1 < h0.grid.count) {
        const double w = rest / step;
        const double s_end = t;
        const double h_end = h0.values[full] * (1.0 - w) + h0.values[full + 1] * w;
        const double dh_end = h0.deriv_values[full] * (1.0 - w) + h0.deriv_values[full + 1] * w;
        const double f_end =
            dh_end - beta * h_end + xi_deterministic(s_end, y0, m, mu, beta);
        acc += 0.5 * (prev + f_end) * rest;
    }
    return acc;
}

}  // namespace

std::pair<double, double> short_rate_law(double t, const ForwardCurve& h0,
                                         const VasicekParams& p, double m, double mu) {
    h0.validate();
    if (t == 0.0) return {h0.values[0], 0.0};
    const double beta = p.beta;
    const double mean = std::exp(beta * t) * h0.values[0] +
                        mean_integral(t, h0, beta, p.a, m, mu);
    const double e2b = std::exp(2.0 * beta * t);
    const double variance = p.a / (2.0 * beta) * (e2b - 1.0) +
                            m / (4.0 * beta * beta) * (-2.0 * beta * t + e2b - 1.0);
    return {mean, variance};
}

double mgf_ramp_exact(double eta, double t, const ForwardCurve& h0, double a0, double beta0) {
    h0.validate();
    const double xi_t = a0 * (std::exp(2.0 * beta0 * t) - 1.0) / (2.0 * beta0) +
                        3.0 * a0 * (std::exp(2.0 * beta0 * t) - 2.0 * beta0 * t - 1.0) /
                            (4.0 * beta0 * beta0);
    if (t == 0.0) return std::exp(eta * h0.values[0]);
    // ramp a(t) = a0 (1 + 3t) corresponds to (y0, m, mu) = (a0, 3 a0, 0)
    const double mean_int = mean_integral(t, h0, beta0, a0, 3.0 * a0, 0.0);
    return std::exp(std::exp(beta0 * t) * eta * h0.values[0] + eta * mean_int +
                    0.5 * eta * eta * xi_t);
}

McValue mc_mgf(const PathEnsemble& ensemble, double eta, double t) {
    const std::size_t idx = ensemble.record_index(t);
    McValue out;
    double sum = 0.0, sum2 = 0.0;
    for (const auto& p : ensemble.paths) {
        if (p.rejected || idx >= p.r.size()) continue;
        const double v = std::exp(eta * p.r[idx]);
        sum += v;
        sum2 += v * v;
        ++out.n;
    }
    if (out.n == 0) throw std::runtime_error("mc_mgf: no surviving paths");
    const double n = static_cast<double>(out.n);
    out.value = sum / n;
    if (out.n < 2) {
        out.se = kNaN;
    } else {
        const double var = std::max(0.0, (sum2 - n * out.value * out.value) / (n - 1.0));
        out.se = std::sqrt(var / n);
    }
    return out;
}

namespace {

// power sums of deviations from a fixed reference point (the sample mean),
// so removing one block and re-centering stays numerically stable
struct PowerSums {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    double n = 0.0;

    void add(double d) {
        const double d2 = d * d;
        s1 += d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
        n += 1.0;
    }
    void merge(const PowerSums& o) {
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        s4 += o.s4;
        n += o.n;
    }
    void remove(const PowerSums& o) {
        s1 -= o.s1;
        s2 -= o.s2;
        s3 -= o.s3;
        s4 -= o.s4;
        n -= o.n;
    }

    struct Stats {
        double mean, sd, skew, exkurt;
        bool defined;
    };
    // ref is the centering point used when accumulating
    Stats stats(double ref) const {
        const double d = s1 / n;  // mean shift relative to ref
        const double m2 = s2 / n - d * d;
        if (m2 <= 0.0) return {ref + d, 0.0, 0.0, 0.0, false};
        const double m3 = s3 / n - 3.0 * d * s2 / n + 2.0 * d * d * d;
        const double m4 = s4 / n - 4.0 * d * s3 / n + 6.0 * d * d * s2 / n - 3.0 * d * d * d * d;
        return {ref + d, std::sqrt(m2), m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0, true};
    }
};

}  // namespace

MomentReport mc_moments(const PathEnsemble& ensemble, double t, std::size_t blocks) {
    const std::size_t idx = ensemble.record_index(t);
    std::vector<double> xs;
    xs.reserve(ensemble.paths.size());
    for (const auto& p : ensemble.paths) {
        if (p.rejected || idx >= p.r.size()) continue;
        xs.push_back(p.r[idx]);
    }
    if (xs.empty()) throw std::runtime_error("mc_moments: no surviving paths");

    MomentReport rep;
    rep.n = xs.size();
    const std::size_t B = std::max<std::size_t>(2, std::min(blocks, xs.size()));
    rep.blocks = B;

    double ref = 0.0;
    for (double x : xs) ref += x;
    ref /= static_cast<double>(xs.size());

    std::vector<PowerSums> block_sums(B);
    for (std::size_t i = 0; i < xs.size(); ++i) block_sums[i % B].add(xs[i] - ref);
    PowerSums total;
    for (const auto& b : block_sums) total.merge(b);

    const auto full = total.stats(ref);
    rep.mean = full.mean;
    rep.sd = full.sd;
    rep.skewness = full.skew;
    rep.excess_kurtosis = full.exkurt;
    rep.higher_moments_defined = full.defined;
    if (!full.defined) {
        rep.se_mean = rep.se_sd = rep.se_skewness = rep.se_excess_kurtosis = kNaN;
        return rep;
    }

    double v_mean = 0.0, v_sd = 0.0, v_skew = 0.0, v_kurt = 0.0;
    double mean_mean = 0.0, mean_sd = 0.0, mean_skew = 0.0, mean_kurt = 0.0;
    std::vector<PowerSums::Stats> loo(B);
    for (std::size_t b = 0; b < B; ++b) {
        PowerSums rest = total;
        rest.remove(block_sums[b]);
        loo[b] = rest.stats(ref);
        mean_mean += loo[b].mean;
        mean_sd += loo[b].sd;
        mean_skew += loo[b].skew;
        mean_kurt += loo[b].exkurt;
    }
    const double nb = static_cast<double>(B);
    mean_mean /= nb;
    mean_sd /= nb;
    mean_skew /= nb;
    mean_kurt /= nb;
    for (std::size_t b = 0; b < B; ++b) {
        v_mean += (loo[b].mean - mean_mean) * (loo[b].mean - mean_mean);
        v_sd += (loo[b].sd - mean_sd) * (loo[b].sd - mean_sd);
        v_skew += (loo[b].skew - mean_skew) * (loo[b].skew - mean_skew);
        v_kurt += (loo[b].exkurt - mean_kurt) * (loo[b].exkurt - mean_kurt);
    }
    const double scale = (nb - 1.0) / nb;
    rep.se_mean = std::sqrt(scale * v_mean);
    rep.se_sd = std::sqrt(scale * v_sd);
    rep.se_skewness = std::sqrt(scale * v_skew);
    rep.se_excess_kurtosis = std::sqrt(scale * v_kurt);
    return rep;
}

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear_fit: need matching arrays of size >= 2");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

namespace {

// Exact-law coupling for the Vasicek volatility-ramp model: rebuild each
// path's terminal rate from the same normal draws with the exact per-step
// variance spectrum, so e^{eta r_exact} has mean exactly equal to the
// closed-form MGF and correlates tightly with the scheme value.
std::pair<double, double> ramp_coupled_error(const SimConfig& cfg, const PathEnsemble& ens,
                                             double eta, double t, double exact_mean) {
    if (cfg.model != ModelKind::Vasicek ||
        cfg.param_spec.kind != ParamProcessSpec::Kind::Ramp) {
        throw std::invalid_argument("coupled control variate requires the Vasicek ramp model");
    }
    const double a0 = cfg.param_spec.vol0;
    const double beta = cfg.param_spec.beta0;
    const double c = -2.0 * beta;
    // F(s) = int (1+3s) e^{cs} ds = e^{cs}((1+3s)/c - 3/c^2);
    // interval variance = a0 e^{2 beta T} (F(s1) - F(s0))
    auto F = [&](double s) { return std::exp(c * s) * ((1.0 + 3.0 * s) / c - 3.0 / (c * c)); };
    const std::size_t n_steps = cfg.n_steps;
    std::vector<double> coef(n_steps);
    const double scale = a0 * std::exp(2.0 * beta * t);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double s0 = cfg.delta * static_cast<double>(k);
        const double s1 = cfg.delta * static_cast<double>(k + 1);
        coef[k] = std::sqrt(std::max(0.0, scale * (F(s1) - F(s0))));
    }

    const std::size_t idx = ens.record_index(t);
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::size_t ip = 0; ip < ens.paths.size(); ++ip) {
        const auto& p = ens.paths[ip];
        if (p.rejected || idx >= p.r.size()) continue;
        RngStream rng(cfg.seed, ip);
        double exact_r = exact_mean;
        for (std::size_t k = 0; k < n_steps; ++k) exact_r += coef[k] * rng.next_normal();
        const double d = std::exp(eta * p.r[idx]) - std::exp(eta * exact_r);
        sum += d;
        sum2 += d * d;
        ++n;
    }
    if (n < 2) throw std::runtime_error("coupled control variate: not enough paths");
    const double nn = static_cast<double>(n);
    const double mean_d = sum / nn;
    const double var = std::max(0.0, (sum2 - nn * mean_d * mean_d) / (nn - 1.0));
    return {mean_d, std::sqrt(var / nn)};
}

}  // namespace

ConvergenceReport convergence_study(const std::function<SimConfig(double)>& make_cfg,
                                    const ConvergenceOptions& opt) {
    if (opt.deltas.size() < 3) {
        throw std::invalid_argument("convergence_study: need at least three deltas");
    }
    for (std::size_t i = 1; i < opt.deltas.size(); ++i) {
        if (!(opt.deltas[i] < opt.deltas[i - 1])) {
            throw std::invalid_argument("convergence_study: deltas must be strictly decreasing");
        }
    }

    ConvergenceReport rep;
    rep.deltas = opt.deltas;
    rep.used_oracle = opt.oracle.has_value();

    std::vector<double> estimates, ses;
    std::vector<std::pair<double, double>> coupled;  // signed error + se
    for (double d : opt.deltas) {
        SimConfig cfg = make_cfg(d);
        const PathEnsemble ens = simulate_paths(cfg);
        if (opt.coupled_control_variate && opt.oracle) {
            if (!opt.exact_mean) {
                throw std::invalid_argument(
                    "convergence_study: coupled control variate needs exact_mean");
            }
            coupled.push_back(ramp_coupled_error(cfg, ens, opt.eta, opt.t, *opt.exact_mean));
            estimates.push_back(*opt.oracle + coupled.back().first);
            ses.push_back(coupled.back().second);
        } else {
            const McValue mc = mc_mgf(ens, opt.eta, opt.t);
            estimates.push_back(mc.value);
            ses.push_back(mc.se);
        }
    }

    double truth;
    if (opt.oracle) {
        truth = *opt.oracle;
    } else {
        // mirror of the extrapolation procedure: truth = intercept of the
        // linear-in-delta fit through the estimates
        const auto fit = linear_fit(opt.deltas, estimates);
        truth = fit.second;
        rep.extrapolated_truth = truth;
    }

    std::vector<double> log_d, log_e;
    for (std::size_t i = 0; i < opt.deltas.size(); ++i) {
        const double err = std::abs(estimates[i] - truth);
        rep.errors.push_back(err);
        rep.ses.push_back(ses[i]);
        const bool excluded = !(err > opt.noise_floor_mult * ses[i]) || err == 0.0;
        rep.excluded.push_back(excluded);
        if (!excluded) {
            log_d.push_back(std::log(opt.deltas[i]));
            log_e.push_back(std::log(err));
        }
    }
    if (log_d.size() >= 2) {
        const auto fit = linear_fit(log_d, log_e);
        rep.slope = fit.first;
        rep.slope_intercept = fit.second;
        rep.slope_reliable = log_d.size() >= 3;
    } else {
        rep.slope = kNaN;
        rep.slope_reliable = false;
    }
    return rep;
}

}  // namespace crc
