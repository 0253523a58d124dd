#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "crc/curves.hpp"
#include "crc/samplers.hpp"
#include "crc/volterra.hpp"

namespace crc {

// Full per-path state of the consistent-recalibration loop. The short end of
// the curve always equals the factor: h.values[0] == x.
struct CrcState {
    ForwardCurve h;
    double x = 0.0;
    ParamState y{};
    std::pair<double, double> theta_head{0.0, 0.0};  // (theta(0), theta(delta)) of the last step
    std::size_t n = 0;
    double t = 0.0;
};

struct SimConfig {
    ModelKind model = ModelKind::Vasicek;
    double delta = 1.0 / 240.0;
    std::size_t n_steps = 240;
    std::size_t n_paths = 1;
    ParamProcessSpec param_spec;
    std::uint64_t seed = 0;
    ForwardCurve initial_curve;       // must cover n_steps*delta + max report tau + delta
    std::vector<double> report_taus;  // times to maturity for recorded yields
    std::size_t record_stride = 1;    // step 0 and the final step are always recorded
    bool clamp_theta = false;         // CIR only: clamp negative theta head instead of aborting
    unsigned threads = 0;             // 0 = CRC_THREADS env var, then hardware concurrency

    void validate() const;
};

struct PathRecord {
    std::vector<double> times;
    std::vector<double> r;
    std::vector<double> bank;              // bank account B(t), trapezoid-accumulated
    std::vector<double> y_vol, y_beta;     // mapped coefficients at record times
    std::vector<double> yields;            // row-major [record][report_tau]
    bool rejected = false;
    double reject_time = 0.0;
    double reject_theta0 = 0.0;
    std::size_t steps_completed = 0;
};

struct PathEnsemble {
    double delta = 0.0;
    std::size_t n_steps = 0;
    std::vector<double> report_taus;
    std::vector<PathRecord> paths;

    std::size_t rejected_count() const;
    // index of the record closest to time t (throws if none within half a step)
    std::size_t record_index(double t) const;
};

// One recalibration step: calibrate the extension head, advance the factor,
// update the curve and its derivative by the closed-form recursions, advance
// the parameter state. Returns the state at t + delta (curve one node
// shorter). The CIR step throws AdmissibilityError when the calibrated head
// is negative.
CrcState crc_step_vasicek(const CrcState& state, const ParamProcessSpec& spec, RngStream& rng);
CrcState crc_step_cir(const CrcState& state, const ParamProcessSpec& spec, RngStream& rng,
                      bool clamp_theta = false);

CrcState make_initial_state(const SimConfig& cfg);

// Path-parallel ensemble simulation; bit-identical output for a given
// (seed, config) regardless of thread count.
PathEnsemble simulate_paths(const SimConfig& cfg);

unsigned resolve_thread_count(unsigned requested, std::size_t n_paths);

}  // namespace crc
