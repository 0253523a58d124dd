// crcsim: simulation and calibration tool for consistently recalibrated
// short-rate models (Vasicek / CIR with stochastic parameter processes).
//
// Subcommands: simulate, calibrate, estimate, rank, converge, moments, rerun.
// Every run writes a manifest.json with the full configuration, seed and
// input/output checksums; `crcsim rerun manifest.json` repeats it bit-exactly.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crc/analytics.hpp"
#include "crc/engine.hpp"
#include "crc/estimate.hpp"
#include "crc/io.hpp"

#ifndef CRCSIM_BUILD_ID
#define CRCSIM_BUILD_ID "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace crc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;  // admissibility exhaustion / negative extension

struct CurveSource {
    std::string spec;          // flat:<level> | ns:<b0,b1,b2,tau0> | csv:<path>[:date]
    fs::path input_path;       // set when spec refers to a file
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

ForwardCurve build_curve(const std::string& spec, double delta, std::size_t count,
                         std::map<std::string, std::string>* inputs) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const TimeGrid grid(delta, count);
    if (kind == "flat") {
        const double level = std::stod(rest);
        ForwardCurve fc;
        fc.grid = grid;
        fc.values.assign(count, level);
        fc.deriv_values.assign(count, 0.0);
        return fc;
    }
    if (kind == "ns") {
        const auto c = parse_list(rest);
        if (c.size() != 4) throw std::invalid_argument("curve ns: needs b0,b1,b2,tau0");
        ForwardCurve fc;
        fc.grid = grid;
        fc.values.resize(count);
        fc.deriv_values.resize(count);
        for (std::size_t n = 0; n < count; ++n) {
            const double tau = grid.time(n);
            const double e = std::exp(-tau / c[3]);
            fc.values[n] = c[0] + (c[1] + c[2] * tau) * e;
            fc.deriv_values[n] = (c[2] - (c[1] + c[2] * tau) / c[3]) * e;
        }
        return fc;
    }
    if (kind == "csv") {
        const auto second = rest.find(':');
        const std::string path = second == std::string::npos ? rest : rest.substr(0, second);
        const std::string date = second == std::string::npos ? "" : rest.substr(second + 1);
        const YieldPanel panel = load_yield_panel(path);
        if (inputs) (*inputs)[path] = file_checksum(path);
        std::size_t row = panel.rows() - 1;
        if (!date.empty()) {
            bool found = false;
            for (std::size_t t = 0; t < panel.rows(); ++t) {
                if (panel.dates[t] == date) {
                    row = t;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::invalid_argument("curve csv: date not found: " + date);
        }
        YieldCurve yc;
        yc.maturities = panel.maturities;
        for (std::size_t i = 0; i < panel.cols(); ++i) yc.yields.push_back(panel.at(row, i));
        return yields_to_forwards(yc, grid);
    }
    throw std::invalid_argument("unknown curve spec '" + spec + "' (flat:|ns:|csv:)");
}

ParamProcessSpec spec_from_json(const json& j) {
    ParamProcessSpec spec;
    const std::string process = j.value("process", "constant");
    if (process == "constant") {
        spec.kind = ParamProcessSpec::Kind::Constant;
    } else if (process == "ramp") {
        spec.kind = ParamProcessSpec::Kind::Ramp;
    } else if (process == "sqrt-vol") {
        spec.kind = ParamProcessSpec::Kind::CirVol;
    } else if (process == "gbm") {
        spec.kind = ParamProcessSpec::Kind::GbmPair;
    } else {
        throw std::invalid_argument("unknown parameter process '" + process + "'");
    }
    spec.vol0 = j.value("vol0", 1e-4);
    spec.beta0 = j.value("beta0", -0.5);
    spec.m = j.value("m", 0.0);
    spec.mu = j.value("mu", 0.0);
    spec.sigma = j.value("sigma", 0.0);
    spec.mu1 = j.value("mu1", 0.0);
    spec.sigma1 = j.value("sigma1", 0.0);
    spec.mu2 = j.value("mu2", 0.0);
    spec.sigma2 = j.value("sigma2", 0.0);
    spec.validate();
    return spec;
}

ModelKind model_from_json(const json& j) {
    const std::string m = j.value("model", "vasicek");
    if (m == "vasicek") return ModelKind::Vasicek;
    if (m == "cir") return ModelKind::Cir;
    throw std::invalid_argument("unknown model '" + m + "' (vasicek|cir)");
}

void write_manifest(const std::string& command, const json& config, std::uint64_t seed,
                    const std::map<std::string, std::string>& inputs,
                    const std::vector<fs::path>& outputs, const fs::path& out_dir) {
    RunManifest m;
    m.command = command;
    m.config_json = config.dump();
    m.seed = seed;
    m.build = CRCSIM_BUILD_ID;
    m.inputs = inputs;
    for (const auto& p : outputs) m.outputs[p.filename().string()] = file_checksum(p);
    m.write(out_dir / "manifest.json");
}

// ------------------------------------------------------------------ simulate
int run_simulate(const json& cfg_json) {
    const fs::path out_dir = cfg_json.value("out", ".");
    fs::create_directories(out_dir);
    std::map<std::string, std::string> inputs;

    SimConfig cfg;
    cfg.model = model_from_json(cfg_json);
    cfg.delta = cfg_json.value("delta", 1.0 / 240.0);
    cfg.n_steps = cfg_json.value("steps", std::size_t{240});
    cfg.n_paths = cfg_json.value("paths", std::size_t{1000});
    cfg.param_spec = spec_from_json(cfg_json);
    cfg.seed = cfg_json.value("seed", std::uint64_t{0});
    cfg.record_stride = cfg_json.value("record_stride", std::size_t{1});
    cfg.clamp_theta = cfg_json.value("clamp_theta", false);
    cfg.threads = cfg_json.value("threads", 0u);
    if (cfg_json.contains("report_taus")) {
        cfg.report_taus = cfg_json["report_taus"].get<std::vector<double>>();
    }
    double max_tau = 0.0;
    for (double tau : cfg.report_taus) max_tau = std::max(max_tau, tau);
    const auto count = static_cast<std::size_t>(
        std::llround((cfg.n_steps * cfg.delta + max_tau) / cfg.delta)) + 4;
    cfg.initial_curve = build_curve(cfg_json.value("curve", "flat:0.02"), cfg.delta, count,
                                    &inputs);

    const PathEnsemble ens = simulate_paths(cfg);
    std::vector<fs::path> outputs;
    const std::string format = cfg_json.value("format", "csv");
    if (format == "csv" || format == "both") {
        const auto p = out_dir / "ensemble.csv";
        write_ensemble_csv(ens, p);
        outputs.push_back(p);
    }
    if (format == "bin" || format == "both") {
        const auto p = out_dir / "ensemble.bin";
        write_ensemble_binary(ens, p);
        outputs.push_back(p);
    }
    if (cfg_json.value("emit_panel", false)) {
        // single-path daily panel of the recorded yields, ready for `estimate`
        YieldPanel panel;
        panel.maturities = cfg.report_taus;
        const auto& rec = ens.paths[0];
        char date[24];
        for (std::size_t k = 0; k < rec.times.size(); ++k) {
            std::snprintf(date, sizeof(date), "%04zu-%02zu-%02zu", 2000 + k / 360,
                          1 + (k / 30) % 12, 1 + k % 30);
            panel.dates.emplace_back(date);
            for (std::size_t i = 0; i < cfg.report_taus.size(); ++i) {
                panel.yields.push_back(rec.yields[k * cfg.report_taus.size() + i]);
            }
        }
        const auto p = out_dir / "panel.csv";
        write_yield_panel(panel, p);
        outputs.push_back(p);
    }
    write_manifest("simulate", cfg_json, cfg.seed, inputs, outputs, out_dir);

    const std::size_t rejected = ens.rejected_count();
    std::cout << "simulated " << cfg.n_paths << " paths (" << rejected << " rejected) -> "
              << out_dir.string() << "\n";
    if (rejected == cfg.n_paths) {
        std::cerr << "error: every path was rejected (inadmissible extension)\n";
        return kExitRuntime;
    }
    return kExitOk;
}

// ----------------------------------------------------------------- calibrate
int run_calibrate(const json& cfg_json) {
    const fs::path out_dir = cfg_json.value("out", ".");
    fs::create_directories(out_dir);
    std::map<std::string, std::string> inputs;

    const ModelKind model = model_from_json(cfg_json);
    const double delta = cfg_json.value("delta", 1.0 / 240.0);
    const double horizon = cfg_json.value("horizon", 10.0);
    const double vol0 = cfg_json.value("vol0", 1e-4);
    const double beta0 = cfg_json.value("beta0", -0.5);
    const auto count = static_cast<std::size_t>(std::llround(horizon / delta)) + 1;
    const ForwardCurve curve =
        build_curve(cfg_json.value("curve", "flat:0.02"), delta, count, &inputs);

    HullWhiteExtension theta;
    if (model == ModelKind::Vasicek) {
        theta = calibrate_vasicek(VasicekParams(vol0, beta0), curve);
    } else {
        const CirParams p(vol0, beta0);
        // g = -h - Psi' x with x the curve short end
        const double x = curve.values[0];
        std::vector<double> g(count);
        for (std::size_t n = 0; n < count; ++n) {
            g[n] = -(curve.values[n] + cir_riccati(p, curve.grid.time(n)).psi_prime * x);
        }
        const double gp0 = -(curve.deriv_values[0] + cir_riccati(p, 0.0).psi_second * x);
        theta = volterra_solve(ModelParams(p), curve.grid, g, gp0);
        if (theta.values[0] < 0.0) {
            std::cerr << "error: inadmissible extension for the CIR model: theta(0)="
                      << theta.values[0] << " < 0 (short end of the curve is too inverted)\n";
            return kExitRuntime;
        }
    }

    const auto out_file = out_dir / "theta.csv";
    std::ofstream out(out_file);
    out << kCsvSchemaHeader << "\ntau,theta\n";
    out.precision(17);
    for (std::size_t n = 0; n < theta.grid.count; ++n) {
        out << theta.grid.time(n) << "," << theta.values[n] << "\n";
    }
    out.close();
    write_manifest("calibrate", cfg_json, 0, inputs, {out_file}, out_dir);
    std::cout << "wrote " << out_file.string() << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ estimate
int run_estimate(const json& cfg_json) {
    const fs::path out_dir = cfg_json.value("out", ".");
    fs::create_directories(out_dir);
    const std::string panel_path = cfg_json.at("panel").get<std::string>();
    const YieldPanel panel = load_yield_panel(panel_path);
    std::map<std::string, std::string> inputs{{panel_path, file_checksum(panel_path)}};

    const ModelKind model = model_from_json(cfg_json);
    const double tau1 = cfg_json.value("tau1", 0.25);
    const double tau2 = cfg_json.value("tau2", 2.0);
    const auto window = cfg_json.value("window", std::size_t{100});
    const double delta = cfg_json.value("delta", 1.0 / 240.0);

    const auto series = model == ModelKind::Vasicek
                            ? estimate_vasicek(panel, tau1, tau2, window, delta)
                            : estimate_cir(panel, tau1, tau2, window, delta);

    const auto out_file = out_dir / "estimates.csv";
    std::ofstream out(out_file);
    out << kCsvSchemaHeader << "\ndate,"
        << (model == ModelKind::Vasicek ? "a_hat" : "alpha_hat") << ",beta_hat,window_valid\n";
    out.precision(17);
    for (const auto& pt : series) {
        out << panel.dates[pt.t_index] << ",";
        if (pt.valid) {
            out << pt.vol << "," << pt.beta << ",1\n";
        } else {
            out << ",,0\n";
        }
    }
    out.close();
    write_manifest("estimate", cfg_json, 0, inputs, {out_file}, out_dir);
    std::cout << "wrote " << out_file.string() << " (" << series.size() << " windows)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------- rank
int run_rank(const json& cfg_json) {
    const fs::path out_dir = cfg_json.value("out", ".");
    fs::create_directories(out_dir);
    const std::string panel_path = cfg_json.at("panel").get<std::string>();
    const YieldPanel panel = load_yield_panel(panel_path);
    std::map<std::string, std::string> inputs{{panel_path, file_checksum(panel_path)}};

    const auto window = cfg_json.value("window", std::size_t{100});
    const double threshold = cfg_json.value("threshold", 1e-6);
    const auto stride = cfg_json.value("stride", std::size_t{1});

    const auto out_file = out_dir / "rank.csv";
    std::ofstream out(out_file);
    out << kCsvSchemaHeader << "\ndate,rank,top_eigenvalue\n";
    out.precision(17);
    for (std::size_t t = window; t < panel.rows(); t += stride) {
        const auto res = covariation_matrix_rank(panel, t, window, threshold);
        out << panel.dates[t] << "," << res.rank << "," << res.eigenvalues.front() << "\n";
    }
    out.close();
    write_manifest("rank", cfg_json, 0, inputs, {out_file}, out_dir);
    std::cout << "wrote " << out_file.string() << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ converge
int run_converge(const json& cfg_json) {
    const fs::path out_dir = cfg_json.value("out", ".");
    fs::create_directories(out_dir);
    std::map<std::string, std::string> inputs;

    const ModelKind model = model_from_json(cfg_json);
    const ParamProcessSpec spec = spec_from_json(cfg_json);
    const double t = cfg_json.value("t", 1.0);
    const auto paths = cfg_json.value("paths", std::size_t{10000});
    const std::uint64_t seed = cfg_json.value("seed", std::uint64_t{0});
    const std::string curve_spec = cfg_json.value("curve", "flat:0.01");

    ConvergenceOptions opt;
    opt.eta = cfg_json.value("eta", 20.0);
    opt.t = t;
    opt.deltas = cfg_json.contains("deltas")
                     ? cfg_json["deltas"].get<std::vector<double>>()
                     : std::vector<double>{0.1, 0.05, 0.025, 0.0125};

    const bool has_oracle = model == ModelKind::Vasicek &&
                            spec.kind == ParamProcessSpec::Kind::Ramp &&
                            !cfg_json.value("plain", false);
    if (has_oracle) {
        const double fine = 1.0 / 2048.0;
        const ForwardCurve h0 = build_curve(
            curve_spec, fine, static_cast<std::size_t>(std::llround(1.1 * t / fine)), &inputs);
        opt.oracle = mgf_ramp_exact(opt.eta, t, h0, spec.vol0, spec.beta0);
        opt.exact_mean =
            short_rate_law(t, h0, VasicekParams(spec.vol0, spec.beta0), 3.0 * spec.vol0, 0.0)
                .first;
        opt.coupled_control_variate = true;
    }

    auto make_cfg = [&](double delta) {
        SimConfig cfg;
        cfg.model = model;
        cfg.delta = delta;
        cfg.n_steps = static_cast<std::size_t>(std::llround(t / delta));
        cfg.n_paths = paths;
        cfg.param_spec = spec;
        cfg.seed = seed;
        cfg.initial_curve = build_curve(curve_spec, delta, cfg.n_steps + 4, nullptr);
        cfg.record_stride = cfg.n_steps;
        cfg.threads = cfg_json.value("threads", 0u);
        return cfg;
    };
    const ConvergenceReport rep = convergence_study(make_cfg, opt);

    const auto out_file = out_dir / "convergence.csv";
    std::ofstream out(out_file);
    out << kCsvSchemaHeader << "\ndelta,error,se,excluded\n";
    out.precision(17);
    for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
        out << rep.deltas[i] << "," << rep.errors[i] << "," << rep.ses[i] << ","
            << (rep.excluded[i] ? 1 : 0) << "\n";
    }
    out.close();

    // plot-ready two-column file for the log-log figure
    const auto loglog_file = out_dir / "convergence_loglog.csv";
    std::ofstream ll(loglog_file);
    ll << kCsvSchemaHeader << "\nlog10_delta,log10_error\n";
    ll.precision(17);
    for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
        if (rep.excluded[i]) continue;
        ll << std::log10(rep.deltas[i]) << "," << std::log10(rep.errors[i]) << "\n";
    }
    ll.close();
    write_manifest("converge", cfg_json, seed, inputs, {out_file, loglog_file}, out_dir);
    std::cout << "slope " << rep.slope << (rep.used_oracle ? " (closed-form reference)" : " (extrapolated reference)")
              << ", wrote " << out_file.string() << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------- moments
int run_moments(const json& cfg_json) {
    const fs::path out_dir = cfg_json.value("out", ".");
    fs::create_directories(out_dir);
    std::map<std::string, std::string> inputs;

    SimConfig cfg;
    cfg.model = model_from_json(cfg_json);
    cfg.delta = cfg_json.value("delta", 1.0 / 240.0);
    const double t = cfg_json.value("t", 1.0);
    cfg.n_steps = static_cast<std::size_t>(std::llround(t / cfg.delta));
    cfg.n_paths = cfg_json.value("paths", std::size_t{10000});
    cfg.param_spec = spec_from_json(cfg_json);
    cfg.seed = cfg_json.value("seed", std::uint64_t{0});
    cfg.record_stride = cfg.n_steps;
    cfg.threads = cfg_json.value("threads", 0u);
    cfg.initial_curve =
        build_curve(cfg_json.value("curve", "flat:0.02"), cfg.delta, cfg.n_steps + 4, &inputs);

    const PathEnsemble ens = simulate_paths(cfg);
    if (ens.rejected_count() == cfg.n_paths) {
        std::cerr << "error: every path was rejected (inadmissible extension)\n";
        return kExitRuntime;
    }
    const MomentReport rep = mc_moments(ens, t);

    const auto out_file = out_dir / "moments.csv";
    std::ofstream out(out_file);
    out << kCsvSchemaHeader << "\nstat,value,se\n";
    out.precision(17);
    out << "mean," << rep.mean << "," << rep.se_mean << "\n";
    out << "sd," << rep.sd << "," << rep.se_sd << "\n";
    out << "skewness," << rep.skewness << "," << rep.se_skewness << "\n";
    out << "excess_kurtosis," << rep.excess_kurtosis << "," << rep.se_excess_kurtosis << "\n";
    out << "paths," << rep.n << ",0\n";
    out.close();
    write_manifest("moments", cfg_json, cfg.seed, inputs, {out_file}, out_dir);
    std::cout << "wrote " << out_file.string() << "\n";
    return kExitOk;
}

int dispatch(const std::string& command, const json& cfg) {
    if (command == "simulate") return run_simulate(cfg);
    if (command == "calibrate") return run_calibrate(cfg);
    if (command == "estimate") return run_estimate(cfg);
    if (command == "rank") return run_rank(cfg);
    if (command == "converge") return run_converge(cfg);
    if (command == "moments") return run_moments(cfg);
    throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"consistent-recalibration short-rate model toolkit"};
    app.require_subcommand(1);

    json cfg;
    std::string config_file;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "load configuration from a manifest/json file");
        sub->add_option_function<std::string>(
            "--out", [&](const std::string& v) { cfg["out"] = v; }, "output directory");
        sub->add_option_function<unsigned>(
            "--threads", [&](unsigned v) { cfg["threads"] = v; },
            "worker threads (also CRC_THREADS env var)");
    };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option_function<std::string>(
            "--model", [&](const std::string& v) { cfg["model"] = v; }, "vasicek|cir");
        sub->add_option_function<std::string>(
            "--process", [&](const std::string& v) { cfg["process"] = v; },
            "constant|ramp|sqrt-vol|gbm parameter process");
        sub->add_option_function<double>(
            "--vol0", [&](double v) { cfg["vol0"] = v; }, "a (vasicek) or alpha (cir) level");
        sub->add_option_function<double>(
            "--beta0", [&](double v) { cfg["beta0"] = v; }, "mean reversion speed (< 0)");
        for (const char* key : {"m", "mu", "sigma", "mu1", "sigma1", "mu2", "sigma2"}) {
            sub->add_option_function<double>(
                std::string("--") + key, [&cfg, key](double v) { cfg[key] = v; },
                "parameter process coefficient");
        }
        sub->add_option_function<std::string>(
            "--curve", [&](const std::string& v) { cfg["curve"] = v; },
            "initial curve: flat:<level> | ns:<b0,b1,b2,tau0> | csv:<path>[:date]");
    };

    auto* sim = app.add_subcommand("simulate", "simulate a path ensemble");
    add_common(sim);
    add_model(sim);
    sim->add_option_function<double>("--delta", [&](double v) { cfg["delta"] = v; }, "step (years)");
    sim->add_option_function<std::size_t>("--steps", [&](std::size_t v) { cfg["steps"] = v; }, "");
    sim->add_option_function<std::size_t>("--paths", [&](std::size_t v) { cfg["paths"] = v; }, "");
    sim->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { cfg["seed"] = v; }, "");
    sim->add_option_function<std::string>(
        "--report-taus", [&](const std::string& v) { cfg["report_taus"] = parse_list(v); },
        "comma list of recorded yield maturities");
    sim->add_option_function<std::size_t>(
        "--record-stride", [&](std::size_t v) { cfg["record_stride"] = v; }, "");
    sim->add_option_function<std::string>(
        "--format", [&](const std::string& v) { cfg["format"] = v; }, "csv|bin|both");
    sim->add_flag_function(
        "--clamp-theta", [&](std::int64_t) { cfg["clamp_theta"] = true; },
        "clamp negative CIR extension heads instead of rejecting (non-standard)");
    sim->add_flag_function(
        "--emit-panel", [&](std::int64_t) { cfg["emit_panel"] = true; },
        "also write the first path as a daily yield panel");

    auto* cal = app.add_subcommand("calibrate", "extension from an initial curve");
    add_common(cal);
    add_model(cal);
    cal->add_option_function<double>("--delta", [&](double v) { cfg["delta"] = v; }, "");
    cal->add_option_function<double>("--horizon", [&](double v) { cfg["horizon"] = v; }, "years");

    auto* est = app.add_subcommand("estimate", "rolling-window parameter estimates");
    add_common(est);
    est->add_option_function<std::string>(
        "--model", [&](const std::string& v) { cfg["model"] = v; }, "vasicek|cir");
    est->add_option_function<std::string>(
        "--panel", [&](const std::string& v) { cfg["panel"] = v; }, "yield panel csv")
        ->required();
    est->add_option_function<double>("--tau1", [&](double v) { cfg["tau1"] = v; }, "");
    est->add_option_function<double>("--tau2", [&](double v) { cfg["tau2"] = v; }, "");
    est->add_option_function<std::size_t>("--window", [&](std::size_t v) { cfg["window"] = v; }, "");
    est->add_option_function<double>("--delta", [&](double v) { cfg["delta"] = v; }, "");

    auto* rnk = app.add_subcommand("rank", "rolling covariation-matrix ranks");
    add_common(rnk);
    rnk->add_option_function<std::string>(
        "--panel", [&](const std::string& v) { cfg["panel"] = v; }, "yield panel csv")
        ->required();
    rnk->add_option_function<std::size_t>("--window", [&](std::size_t v) { cfg["window"] = v; }, "");
    rnk->add_option_function<double>(
        "--threshold", [&](double v) { cfg["threshold"] = v; }, "relative eigenvalue cutoff");
    rnk->add_option_function<std::size_t>("--stride", [&](std::size_t v) { cfg["stride"] = v; }, "");

    auto* con = app.add_subcommand("converge", "step-size convergence study of the MGF");
    add_common(con);
    add_model(con);
    con->add_option_function<std::string>(
        "--deltas", [&](const std::string& v) { cfg["deltas"] = parse_list(v); },
        "comma list, decreasing");
    con->add_option_function<double>("--eta", [&](double v) { cfg["eta"] = v; }, "");
    con->add_option_function<double>("--t", [&](double v) { cfg["t"] = v; }, "");
    con->add_option_function<std::size_t>("--paths", [&](std::size_t v) { cfg["paths"] = v; }, "");
    con->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { cfg["seed"] = v; }, "");
    con->add_flag_function(
        "--plain", [&](std::int64_t) { cfg["plain"] = true; },
        "plain Monte Carlo even when a closed-form reference exists");

    auto* mom = app.add_subcommand("moments", "terminal short-rate moment report");
    add_common(mom);
    add_model(mom);
    mom->add_option_function<double>("--delta", [&](double v) { cfg["delta"] = v; }, "");
    mom->add_option_function<double>("--t", [&](double v) { cfg["t"] = v; }, "");
    mom->add_option_function<std::size_t>("--paths", [&](std::size_t v) { cfg["paths"] = v; }, "");
    mom->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { cfg["seed"] = v; }, "");

    auto* rer = app.add_subcommand("rerun", "repeat a run from its manifest");
    std::string manifest_path;
    rer->add_option("manifest", manifest_path, "manifest.json of a previous run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (rer->parsed()) {
            const RunManifest m = RunManifest::load(manifest_path);
            return dispatch(m.command, json::parse(m.config_json));
        }
        CLI::App* sub = app.get_subcommands().front();
        if (!config_file.empty()) {
            // configuration file provides defaults; explicit flags already in cfg win
            const RunManifest m = RunManifest::load(config_file);
            json merged = json::parse(m.config_json);
            merged.merge_patch(cfg);
            cfg = merged;
        }
        return dispatch(sub->get_name(), cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
