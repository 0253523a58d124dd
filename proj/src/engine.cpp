#include "crc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace crc {

namespace {

// In-place curve update for one Vasicek step. On entry h[0..len-1] and
// dh[0..dlen-1] hold the curve at t_n; on exit h[1..len-1], dh[1..dlen-1]
// hold it at t_{n+1} (the logical grid start moves one node to the right).
// Returns the new short rate.
double vasicek_curve_step(double* h, std::size_t len, double* dh, std::size_t dlen, double r,
                          const VasicekParams& p, double delta, RngStream& rng, double* theta0_out,
                          double* theta_delta_out) {
    const double b = p.beta;
    const double e = std::exp(b * delta);
    const double e2 = e * e;

    const double theta0 = dh[0] - b * h[0];
    const double theta_delta = dh[1] - b * h[1] - p.a / (2.0 * b) * (1.0 - e2);
    const double i_hat = -0.5 * delta * (e * theta0 + theta_delta);

    const double r_new = vasicek_step_exact(r, p, i_hat, delta, rng);
    const double innov = -e * r + r_new + i_hat;

    const double c_h = p.a / (2.0 * b * b) * (1.0 - e);   // pairs with (2 - (1+e) q)
    const double c_dh = p.a / b * (1.0 - e);              // pairs with (1 - (1+e) q)
    const double p1 = 1.0 + e;

    double q = 1.0;  // e^{b tau_j}
    const std::size_t m = std::min(dlen, len);
    std::size_t j = 0;
    for (; j + 1 < m; ++j) {
        h[j + 1] += q * (c_h * (2.0 - p1 * q) + innov);
        dh[j + 1] += q * (c_dh * (1.0 - p1 * q) + b * innov);
        q *= e;
    }
    for (; j + 1 < len; ++j) {
        h[j + 1] += q * (c_h * (2.0 - p1 * q) + innov);
        q *= e;
    }
    // the discrete recursion reproduces the short end only to O(delta^3);
    // pin it to the drawn rate to keep the state invariant h(0) = r exact
    h[1] = r_new;
    *theta0_out = theta0;
    *theta_delta_out = theta_delta;
    return r_new;
}

double cir_curve_step(double* h, std::size_t len, double* dh, std::size_t dlen, double r,
                      const CirParams& p, double delta, double t_now, RngStream& rng,
                      bool clamp_theta, double* theta0_out, double* theta_delta_out) {
    const double b = p.beta;
    const double g = p.gamma;

    double theta0 = dh[0] - b * h[0];
    if (theta0 < 0.0 && clamp_theta) theta0 = 0.0;
    const double psi_prime_delta = cir_riccati(p, delta).psi_prime;
    double theta_delta = 2.0 / delta * (h[1] + psi_prime_delta * r) + psi_prime_delta * theta0;
    if (theta_delta < 0.0 && clamp_theta) theta_delta = 0.0;
    if (theta0 < 0.0 || theta_delta < 0.0) {
        throw AdmissibilityError(t_now, theta0, theta_delta);
    }

    const double r_new = cir_step_order2(r, p, theta0, theta_delta, delta, rng);

    const double A = r + 0.5 * delta * theta0;
    const double B = r_new - 0.5 * delta * theta_delta;

    // iterate w = e^{-gamma tau_j}; Psi' and Psi'' evaluated in the stable form
    const double wstep = std::exp(-g * delta);
    double w = 1.0;
    double psi_p_prev = -1.0;  // Psi'(0)
    double psi_s_prev = -b;    // Psi''(0) = (alpha Psi(0) + b) Psi'(0)
    const std::size_t m = std::min(dlen, len);
    for (std::size_t j = 0; j + 1 < len; ++j) {
        w *= wstep;
        const double omw = 1.0 - w;
        const double inv = 1.0 / (g * (1.0 + w) - b * omw);
        const double psi = -2.0 * omw * inv;
        const double psi_p = (-2.0 * g + 2.0 * g * omw * (g - b) * inv) * inv;
        const double psi_s = (p.alpha * psi + b) * psi_p;
        h[j + 1] += psi_p * A - psi_p_prev * B;
        if (j + 1 < m) dh[j + 1] += psi_s * A - psi_s_prev * B;
        psi_p_prev = psi_p;
        psi_s_prev = psi_s;
    }
    h[1] = r_new;  // exact identity of the update formulas; assignment makes it bitwise
    *theta0_out = theta0;
    *theta_delta_out = theta_delta;
    return r_new;
}

struct Recorder {
    const SimConfig* cfg;
    std::vector<std::size_t> report_nodes;  // grid index per report tau
    std::size_t max_node = 0;

    explicit Recorder(const SimConfig& c) : cfg(&c) {
        for (double tau : c.report_taus) {
            const double pos = tau / c.delta;
            const auto node = static_cast<std::size_t>(std::llround(pos));
            // tolerate rounded step sizes such as 0.0041666667 for 1/240
            if (std::abs(pos - static_cast<double>(node)) > 1e-3) {
                throw std::invalid_argument("simulate_paths: report taus must sit on the grid");
            }
            report_nodes.push_back(node);
            max_node = std::max(max_node, node);
        }
    }

    void record(PathRecord& rec, const double* h, double t, double r, double bank,
                const ModelCoeffs& coeffs) const {
        rec.times.push_back(t);
        rec.r.push_back(r);
        rec.bank.push_back(bank);
        rec.y_vol.push_back(coeffs.vol);
        rec.y_beta.push_back(coeffs.beta);
        if (!report_nodes.empty()) {
            // prefix trapezoid up to the longest requested maturity
            double acc = 0.0;
            std::size_t next = 0;
            std::vector<double> row(report_nodes.size(), 0.0);
            for (std::size_t k = 0; k < max_node; ++k) {
                while (next < report_nodes.size() && report_nodes[next] == k) {
                    row[next] = (k == 0) ? r : acc / (cfg->delta * static_cast<double>(k));
                    ++next;
                }
                acc += 0.5 * (h[k] + h[k + 1]) * cfg->delta;
            }
            while (next < report_nodes.size()) {
                const std::size_t k = report_nodes[next];
                row[next] = (k == 0) ? r : acc / (cfg->delta * static_cast<double>(k));
                ++next;
            }
            rec.yields.insert(rec.yields.end(), row.begin(), row.end());
        }
    }
};

void run_one_path(const SimConfig& cfg, const Recorder& recorder, std::uint64_t path_index,
                  PathRecord& rec) {
    const std::size_t total = cfg.initial_curve.grid.count;
    std::vector<double> h(cfg.initial_curve.values);
    // derivative values are consumed only at the head; keep the prefix that
    // future steps will reach (n_steps + 1 nodes)
    const std::size_t dlen0 = std::min(total, cfg.n_steps + 2);
    std::vector<double> dh(cfg.initial_curve.deriv_values.begin(),
                           cfg.initial_curve.deriv_values.begin() +
                               static_cast<std::ptrdiff_t>(dlen0));

    RngStream rng(cfg.seed, path_index);
    ParamState y = param_initial_state(cfg.param_spec);
    double r = h[0];
    double bank = 1.0;
    double t = 0.0;
    std::size_t offset = 0;

    recorder.record(rec, h.data(), t, r, bank, param_coeffs(cfg.param_spec, y, t));

    for (std::size_t n = 0; n < cfg.n_steps; ++n) {
        const ModelCoeffs coeffs = param_coeffs(cfg.param_spec, y, t);
        const std::size_t len = total - offset;
        const std::size_t dlen = (dlen0 > offset) ? dlen0 - offset : 0;
        double theta0 = 0.0, theta_delta = 0.0;
        double r_new = 0.0;
        try {
            if (cfg.model == ModelKind::Vasicek) {
                r_new = vasicek_curve_step(h.data() + offset, len, dh.data() + offset, dlen, r,
                                           VasicekParams(coeffs.vol, coeffs.beta), cfg.delta, rng,
                                           &theta0, &theta_delta);
            } else {
                r_new = cir_curve_step(h.data() + offset, len, dh.data() + offset, dlen, r,
                                       CirParams(coeffs.vol, coeffs.beta), cfg.delta, t, rng,
                                       cfg.clamp_theta, &theta0, &theta_delta);
            }
        } catch (const AdmissibilityError& err) {
            rec.rejected = true;
            rec.reject_time = t;
            rec.reject_theta0 = err.theta0;
            rec.steps_completed = n;
            return;
        }
        bank *= std::exp(0.5 * cfg.delta * (r + r_new));
        y = param_step(cfg.param_spec, y, t, cfg.delta, rng);
        r = r_new;
        t = cfg.delta * static_cast<double>(n + 1);
        ++offset;
        const bool last = (n + 1 == cfg.n_steps);
        if (last || ((n + 1) % cfg.record_stride == 0)) {
            recorder.record(rec, h.data() + offset, t, r, bank,
                            param_coeffs(cfg.param_spec, y, t));
        }
    }
    rec.steps_completed = cfg.n_steps;
}

}  // namespace

void SimConfig::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("SimConfig: delta must be positive");
    if (n_paths == 0) throw std::invalid_argument("SimConfig: need at least one path");
    if (record_stride == 0) throw std::invalid_argument("SimConfig: record_stride must be >= 1");
    param_spec.validate();
    initial_curve.validate();
    if (std::abs(initial_curve.grid.step - delta) > 1e-12) {
        throw std::invalid_argument("SimConfig: initial curve grid step must equal delta");
    }
    double max_tau = 0.0;
    for (double tau : report_taus) max_tau = std::max(max_tau, tau);
    const double needed = static_cast<double>(n_steps) * delta + max_tau + delta;
    if (initial_curve.grid.max_time() + 1e-12 < needed) {
        throw std::invalid_argument(
            "SimConfig: initial curve must cover horizon + max report maturity + delta");
    }
}

std::size_t PathEnsemble::rejected_count() const {
    std::size_t k = 0;
    for (const auto& p : paths) k += p.rejected ? 1 : 0;
    return k;
}

std::size_t PathEnsemble::record_index(double t) const {
    for (const auto& p : paths) {
        if (p.rejected) continue;
        for (std::size_t i = 0; i < p.times.size(); ++i) {
            if (std::abs(p.times[i] - t) < 0.5 * delta) return i;
        }
        break;
    }
    throw std::out_of_range("PathEnsemble: no record near requested time");
}

namespace {

CrcState step_state(const CrcState& state, const ParamProcessSpec& spec, RngStream& rng,
                    ModelKind kind, bool clamp_theta) {
    CrcState out;
    const double delta = state.h.grid.step;
    std::vector<double> h(state.h.values);
    std::vector<double> dh(state.h.deriv_values);
    const ModelCoeffs coeffs = param_coeffs(spec, state.y, state.t);
    double theta0 = 0.0, theta_delta = 0.0;
    double r_new;
    if (kind == ModelKind::Vasicek) {
        r_new = vasicek_curve_step(h.data(), h.size(), dh.data(), dh.size(), state.x,
                                   VasicekParams(coeffs.vol, coeffs.beta), delta, rng, &theta0,
                                   &theta_delta);
    } else {
        r_new = cir_curve_step(h.data(), h.size(), dh.data(), dh.size(), state.x,
                               CirParams(coeffs.vol, coeffs.beta), delta, state.t, rng,
                               clamp_theta, &theta0, &theta_delta);
    }
    out.h.grid = TimeGrid(delta, state.h.grid.count - 1);
    out.h.values.assign(h.begin() + 1, h.end());
    out.h.deriv_values.assign(dh.begin() + 1, dh.end());
    out.x = r_new;
    out.y = param_step(spec, state.y, state.t, delta, rng);
    out.theta_head = {theta0, theta_delta};
    out.n = state.n + 1;
    out.t = state.t + delta;
    return out;
}

}  // namespace

CrcState crc_step_vasicek(const CrcState& state, const ParamProcessSpec& spec, RngStream& rng) {
    return step_state(state, spec, rng, ModelKind::Vasicek, false);
}

CrcState crc_step_cir(const CrcState& state, const ParamProcessSpec& spec, RngStream& rng,
                      bool clamp_theta) {
    return step_state(state, spec, rng, ModelKind::Cir, clamp_theta);
}

CrcState make_initial_state(const SimConfig& cfg) {
    cfg.validate();
    CrcState s;
    s.h = cfg.initial_curve;
    s.x = cfg.initial_curve.values[0];
    s.y = param_initial_state(cfg.param_spec);
    s.n = 0;
    s.t = 0.0;
    return s;
}

unsigned resolve_thread_count(unsigned requested, std::size_t n_paths) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    // CRC_THREADS caps the worker count
    if (const char* env = std::getenv("CRC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = std::min(n, static_cast<unsigned>(v));
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, n_paths)));
}

PathEnsemble simulate_paths(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.model == ModelKind::Cir && cfg.initial_curve.values[0] < 0.0) {
        throw std::invalid_argument("simulate_paths: CIR requires a nonnegative short end");
    }
    const Recorder recorder(cfg);

    PathEnsemble out;
    out.delta = cfg.delta;
    out.n_steps = cfg.n_steps;
    out.report_taus = cfg.report_taus;
    out.paths.resize(cfg.n_paths);

    const unsigned n_threads = resolve_thread_count(cfg.threads, cfg.n_paths);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < cfg.n_paths; ++i) {
            run_one_path(cfg, recorder, i, out.paths[i]);
        }
        return out;
    }

    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < cfg.n_paths; i += n_threads) {
                run_one_path(cfg, recorder, i, out.paths[i]);
            }
        });
    }
    for (auto& th : workers) th.join();
    return out;
}

}  // namespace crc
