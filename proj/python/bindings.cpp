#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crc/analytics.hpp"
#include "crc/engine.hpp"
#include "crc/estimate.hpp"
#include "crc/io.hpp"

namespace py = pybind11;
using namespace crc;

namespace {

ParamProcessSpec make_spec(const std::string& process, double vol0, double beta0, double m,
                           double mu, double sigma, double mu1, double sigma1, double mu2,
                           double sigma2) {
    ParamProcessSpec spec;
    if (process == "constant") {
        spec.kind = ParamProcessSpec::Kind::Constant;
    } else if (process == "ramp") {
        spec.kind = ParamProcessSpec::Kind::Ramp;
    } else if (process == "sqrt-vol") {
        spec.kind = ParamProcessSpec::Kind::CirVol;
    } else if (process == "gbm") {
        spec.kind = ParamProcessSpec::Kind::GbmPair;
    } else {
        throw std::invalid_argument("process must be constant|ramp|sqrt-vol|gbm");
    }
    spec.vol0 = vol0;
    spec.beta0 = beta0;
    spec.m = m;
    spec.mu = mu;
    spec.sigma = sigma;
    spec.mu1 = mu1;
    spec.sigma1 = sigma1;
    spec.mu2 = mu2;
    spec.sigma2 = sigma2;
    spec.validate();
    return spec;
}

ModelParams params_from(const std::string& model, double vol, double beta) {
    if (model == "vasicek") return VasicekParams(vol, beta);
    if (model == "cir") return CirParams(vol, beta);
    throw std::invalid_argument("model must be vasicek|cir");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "consistent-recalibration short-rate models: curves, calibration, simulation";

    py::register_exception<AdmissibilityError>(m, "AdmissibilityError");

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, std::size_t>(), py::arg("step"), py::arg("count"))
        .def_readonly("step", &TimeGrid::step)
        .def_readonly("count", &TimeGrid::count)
        .def("time", &TimeGrid::time)
        .def("max_time", &TimeGrid::max_time);

    py::class_<YieldCurve>(m, "YieldCurve")
        .def(py::init([](std::vector<double> mats, std::vector<double> ys) {
                 YieldCurve yc{std::move(mats), std::move(ys)};
                 yc.validate();
                 return yc;
             }),
             py::arg("maturities"), py::arg("yields"))
        .def_readonly("maturities", &YieldCurve::maturities)
        .def_readonly("yields", &YieldCurve::yields);

    py::class_<ForwardCurve>(m, "ForwardCurve")
        .def(py::init([](const TimeGrid& grid, std::vector<double> values,
                         std::vector<double> derivs) {
                 ForwardCurve fc{grid, std::move(values), std::move(derivs)};
                 fc.validate();
                 return fc;
             }),
             py::arg("grid"), py::arg("values"), py::arg("deriv_values"))
        .def_readonly("grid", &ForwardCurve::grid)
        .def_readonly("values", &ForwardCurve::values)
        .def_readonly("deriv_values", &ForwardCurve::deriv_values)
        .def("value_at", &ForwardCurve::value_at);

    m.def("yields_to_forwards", &yields_to_forwards, py::arg("yield_curve"), py::arg("grid"));
    m.def(
        "forwards_to_yields",
        [](const ForwardCurve& fc, const std::vector<double>& mats) {
            return forwards_to_yields(fc, mats);
        },
        py::arg("forward_curve"), py::arg("maturities"));
    m.def("shift", &shift, py::arg("forward_curve"), py::arg("k"));
    m.def("bond_price_from_forwards", &bond_price_from_forwards, py::arg("forward_curve"),
          py::arg("T"));
    m.def("forward_yield", &forward_yield, py::arg("forward_curve"), py::arg("tau"));

    py::class_<RiccatiPair>(m, "RiccatiPair")
        .def_readonly("phi", &RiccatiPair::phi)
        .def_readonly("psi", &RiccatiPair::psi)
        .def_readonly("psi_prime", &RiccatiPair::psi_prime)
        .def_readonly("psi_second", &RiccatiPair::psi_second);

    m.def(
        "riccati",
        [](const std::string& model, double vol, double beta, double t) {
            return riccati(params_from(model, vol, beta), t);
        },
        py::arg("model"), py::arg("vol"), py::arg("beta"), py::arg("t"));
    m.def(
        "hjm_coeffs",
        [](const std::string& model, double vol, double beta, double x, double tau) {
            if (model == "vasicek") return hjm_coeffs_vasicek(VasicekParams(vol, beta), tau);
            return hjm_coeffs_cir(CirParams(vol, beta), x, tau);
        },
        py::arg("model"), py::arg("vol"), py::arg("beta"), py::arg("x"), py::arg("tau"));

    py::class_<HullWhiteExtension>(m, "HullWhiteExtension")
        .def(py::init([](const TimeGrid& grid, std::vector<double> values) {
                 HullWhiteExtension th{grid, std::move(values)};
                 th.validate();
                 return th;
             }),
             py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &HullWhiteExtension::grid)
        .def_readonly("values", &HullWhiteExtension::values);

    m.def(
        "h_operator",
        [](const std::string& model, double vol, double beta, const HullWhiteExtension& theta,
           double x) { return h_operator(params_from(model, vol, beta), theta, x); },
        py::arg("model"), py::arg("vol"), py::arg("beta"), py::arg("theta"), py::arg("x"));
    m.def(
        "bond_price_affine",
        [](const std::string& model, double vol, double beta, const HullWhiteExtension& theta,
           double x, double t, double T) {
            return bond_price_affine(params_from(model, vol, beta), theta, x, t, T);
        },
        py::arg("model"), py::arg("vol"), py::arg("beta"), py::arg("theta"), py::arg("x"),
        py::arg("t"), py::arg("T"));
    m.def(
        "volterra_apply",
        [](const std::string& model, double vol, double beta, const HullWhiteExtension& theta) {
            return volterra_apply(params_from(model, vol, beta), theta);
        },
        py::arg("model"), py::arg("vol"), py::arg("beta"), py::arg("theta"));
    m.def(
        "volterra_solve",
        [](const std::string& model, double vol, double beta, const TimeGrid& grid,
           const std::vector<double>& g, double g_prime0) {
            return volterra_solve(params_from(model, vol, beta), grid, g, g_prime0);
        },
        py::arg("model"), py::arg("vol"), py::arg("beta"), py::arg("grid"), py::arg("g"),
        py::arg("g_prime0"));
    m.def(
        "calibrate_vasicek",
        [](double a, double beta, const ForwardCurve& fc) {
            return calibrate_vasicek(VasicekParams(a, beta), fc);
        },
        py::arg("a"), py::arg("beta"), py::arg("forward_curve"));
    m.def(
        "calibrate_cir_head",
        [](double alpha, double beta, const ForwardCurve& fc, double x) {
            return calibrate_cir_head(CirParams(alpha, beta), fc, x);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("forward_curve"), py::arg("x"));

    py::class_<PathRecord>(m, "PathRecord")
        .def_readonly("times", &PathRecord::times)
        .def_readonly("r", &PathRecord::r)
        .def_readonly("bank", &PathRecord::bank)
        .def_readonly("y_vol", &PathRecord::y_vol)
        .def_readonly("y_beta", &PathRecord::y_beta)
        .def_readonly("yields", &PathRecord::yields)
        .def_readonly("rejected", &PathRecord::rejected)
        .def_readonly("reject_time", &PathRecord::reject_time)
        .def_readonly("reject_theta0", &PathRecord::reject_theta0)
        .def_readonly("steps_completed", &PathRecord::steps_completed);

    py::class_<PathEnsemble>(m, "PathEnsemble")
        .def_readonly("delta", &PathEnsemble::delta)
        .def_readonly("n_steps", &PathEnsemble::n_steps)
        .def_readonly("report_taus", &PathEnsemble::report_taus)
        .def_readonly("paths", &PathEnsemble::paths)
        .def("rejected_count", &PathEnsemble::rejected_count);

    m.def(
        "simulate",
        [](const std::string& model, const std::string& process, double vol0, double beta0,
           double delta, std::size_t steps, std::size_t paths, std::uint64_t seed,
           const ForwardCurve& initial_curve, const std::vector<double>& report_taus,
           std::size_t record_stride, bool clamp_theta, unsigned threads, double m_, double mu,
           double sigma, double mu1, double sigma1, double mu2, double sigma2) {
            SimConfig cfg;
            cfg.model = model == "cir" ? ModelKind::Cir : ModelKind::Vasicek;
            if (model != "cir" && model != "vasicek") {
                throw std::invalid_argument("model must be vasicek|cir");
            }
            cfg.param_spec =
                make_spec(process, vol0, beta0, m_, mu, sigma, mu1, sigma1, mu2, sigma2);
            cfg.delta = delta;
            cfg.n_steps = steps;
            cfg.n_paths = paths;
            cfg.seed = seed;
            cfg.initial_curve = initial_curve;
            cfg.report_taus = report_taus;
            cfg.record_stride = record_stride;
            cfg.clamp_theta = clamp_theta;
            cfg.threads = threads;
            py::gil_scoped_release release;
            return simulate_paths(cfg);
        },
        py::arg("model"), py::arg("process"), py::arg("vol0"), py::arg("beta0"),
        py::arg("delta"), py::arg("steps"), py::arg("paths"), py::arg("seed"),
        py::arg("initial_curve"), py::arg("report_taus") = std::vector<double>{},
        py::arg("record_stride") = 1, py::arg("clamp_theta") = false, py::arg("threads") = 0,
        py::arg("m") = 0.0, py::arg("mu") = 0.0, py::arg("sigma") = 0.0, py::arg("mu1") = 0.0,
        py::arg("sigma1") = 0.0, py::arg("mu2") = 0.0, py::arg("sigma2") = 0.0);

    py::class_<YieldPanel>(m, "YieldPanel")
        .def(py::init([](std::vector<std::string> dates, std::vector<double> maturities,
                         std::vector<double> yields_rowmajor) {
                 YieldPanel p{std::move(dates), std::move(maturities),
                              std::move(yields_rowmajor)};
                 p.validate();
                 return p;
             }),
             py::arg("dates"), py::arg("maturities"), py::arg("yields_rowmajor"))
        .def_readonly("dates", &YieldPanel::dates)
        .def_readonly("maturities", &YieldPanel::maturities)
        .def_readonly("yields", &YieldPanel::yields)
        .def("at", &YieldPanel::at);

    m.def(
        "load_yield_panel",
        [](const std::string& path) { return load_yield_panel(path); }, py::arg("path"));
    m.def(
        "write_yield_panel",
        [](const YieldPanel& p, const std::string& path) { write_yield_panel(p, path); },
        py::arg("panel"), py::arg("path"));

    m.def("realized_covariation", &realized_covariation, py::arg("panel"), py::arg("i"),
          py::arg("j"), py::arg("t_index"), py::arg("window"));

    py::class_<EstimatePoint>(m, "EstimatePoint")
        .def_readonly("t_index", &EstimatePoint::t_index)
        .def_readonly("vol", &EstimatePoint::vol)
        .def_readonly("beta", &EstimatePoint::beta)
        .def_readonly("valid", &EstimatePoint::valid);

    m.def("estimate_vasicek", &estimate_vasicek, py::arg("panel"), py::arg("tau1"),
          py::arg("tau2"), py::arg("window"), py::arg("delta"));
    m.def("estimate_cir", &estimate_cir, py::arg("panel"), py::arg("tau1"), py::arg("tau2"),
          py::arg("window"), py::arg("delta"));
    m.def(
        "fit_gbm",
        [](const std::vector<double>& series, double delta) { return fit_gbm(series, delta); },
        py::arg("series"), py::arg("delta"));

    py::class_<CovariationRank>(m, "CovariationRank")
        .def_readonly("matrix", &CovariationRank::matrix)
        .def_readonly("eigenvalues", &CovariationRank::eigenvalues)
        .def_readonly("rank", &CovariationRank::rank);

    m.def("covariation_matrix_rank", &covariation_matrix_rank, py::arg("panel"),
          py::arg("t_index"), py::arg("window"), py::arg("rel_threshold") = 1e-6);

    m.def("xi_deterministic", &xi_deterministic, py::arg("t"), py::arg("y0"), py::arg("m"),
          py::arg("mu"), py::arg("beta"));
    m.def(
        "short_rate_law",
        [](double t, const ForwardCurve& h0, double a, double beta, double m_, double mu) {
            return short_rate_law(t, h0, VasicekParams(a, beta), m_, mu);
        },
        py::arg("t"), py::arg("h0"), py::arg("a"), py::arg("beta"), py::arg("m"),
        py::arg("mu"));
    m.def("mgf_ramp_exact", &mgf_ramp_exact, py::arg("eta"), py::arg("t"), py::arg("h0"),
          py::arg("a0"), py::arg("beta0"));

    py::class_<McValue>(m, "McValue")
        .def_readonly("value", &McValue::value)
        .def_readonly("se", &McValue::se)
        .def_readonly("n", &McValue::n);
    m.def("mc_mgf", &mc_mgf, py::arg("ensemble"), py::arg("eta"), py::arg("t"));

    py::class_<MomentReport>(m, "MomentReport")
        .def_readonly("mean", &MomentReport::mean)
        .def_readonly("sd", &MomentReport::sd)
        .def_readonly("skewness", &MomentReport::skewness)
        .def_readonly("excess_kurtosis", &MomentReport::excess_kurtosis)
        .def_readonly("se_mean", &MomentReport::se_mean)
        .def_readonly("se_sd", &MomentReport::se_sd)
        .def_readonly("se_skewness", &MomentReport::se_skewness)
        .def_readonly("se_excess_kurtosis", &MomentReport::se_excess_kurtosis)
        .def_readonly("n", &MomentReport::n)
        .def_readonly("blocks", &MomentReport::blocks)
        .def_readonly("higher_moments_defined", &MomentReport::higher_moments_defined);
    m.def("mc_moments", &mc_moments, py::arg("ensemble"), py::arg("t"),
          py::arg("blocks") = 1000);

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("path_index"))
        .def("next_uniform", &RngStream::next_uniform)
        .def("next_normal", &RngStream::next_normal)
        .def("position", &RngStream::position)
        .def("skip_to", &RngStream::skip_to);
}
