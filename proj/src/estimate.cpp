#include "crc/estimate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crc {

void YieldPanel::validate() const {
    if (dates.empty() || maturities.empty()) throw std::invalid_argument("YieldPanel: empty");
    if (yields.size() != rows() * cols()) {
        throw std::invalid_argument("YieldPanel: yields size must be rows*cols");
    }
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw std::invalid_argument("YieldPanel: dates must be strictly increasing");
        }
    }
    for (std::size_t i = 1; i < maturities.size(); ++i) {
        if (!(maturities[i - 1] < maturities[i])) {
            throw std::invalid_argument("YieldPanel: maturities must be strictly increasing");
        }
    }
}

std::size_t YieldPanel::maturity_index(double tau) const {
    for (std::size_t i = 0; i < maturities.size(); ++i) {
        if (std::abs(maturities[i] - tau) < 1e-9) return i;
    }
    throw std::invalid_argument("YieldPanel: requested maturity not present");
}

double realized_covariation(const YieldPanel& panel, std::size_t i, std::size_t j,
                            std::size_t t_index, std::size_t M) {
    if (i >= panel.cols() || j >= panel.cols()) {
        throw std::out_of_range("realized_covariation: maturity index out of range");
    }
    if (t_index >= panel.rows() || t_index < M) {
        throw std::out_of_range("realized_covariation: window exceeds history");
    }
    double acc = 0.0;
    for (std::size_t k = t_index - M + 1; k <= t_index; ++k) {
        const double di = panel.at(k, i) - panel.at(k - 1, i);
        const double dj = panel.at(k, j) - panel.at(k - 1, j);
        acc += di * dj;
    }
    return acc;
}

namespace {

bool window_clean(const YieldPanel& panel, std::size_t i, std::size_t t_index, std::size_t M) {
    for (std::size_t k = t_index - M; k <= t_index; ++k) {
        if (!std::isfinite(panel.at(k, i))) return false;
    }
    return true;
}

}  // namespace

std::vector<EstimatePoint> estimate_vasicek(const YieldPanel& panel, double tau1, double tau2,
                                            std::size_t M, double delta) {
    panel.validate();
    if (M < 2) throw std::invalid_argument("estimate_vasicek: window must be >= 2");
    const std::size_t i1 = panel.maturity_index(tau1);
    const std::size_t i2 = panel.maturity_index(tau2);
    std::vector<EstimatePoint> out;
    for (std::size_t t = M; t < panel.rows(); ++t) {
        EstimatePoint pt;
        pt.t_index = t;
        if (window_clean(panel, i1, t, M) && window_clean(panel, i2, t, M)) {
            const double q1 = realized_covariation(panel, i1, i1, t, M);
            const double q2 = realized_covariation(panel, i2, i2, t, M);
            const double dm = delta * static_cast<double>(M);
            if (q2 > 0.0 && q1 >= 0.0) {
                pt.vol = q1 / dm;
                pt.beta = -(1.0 / tau2) * std::sqrt(dm * pt.vol / q2);
                pt.valid = true;
            }
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<EstimatePoint> estimate_cir(const YieldPanel& panel, double tau1, double tau2,
                                        std::size_t M, double delta) {
    panel.validate();
    if (M < 2) throw std::invalid_argument("estimate_cir: window must be >= 2");
    const std::size_t i1 = panel.maturity_index(tau1);
    const std::size_t i2 = panel.maturity_index(tau2);
    std::vector<EstimatePoint> out;
    for (std::size_t t = M; t < panel.rows(); ++t) {
        EstimatePoint pt;
        pt.t_index = t;
        if (!window_clean(panel, i1, t, M) || !window_clean(panel, i2, t, M)) {
            out.push_back(pt);
            continue;
        }
        // short-rate proxy sum over the window, delta * sum_{m=0}^{M-1} r(t - m delta, tau1)
        double rate_sum = 0.0;
        for (std::size_t m = 0; m < M; ++m) rate_sum += panel.at(t - m, i1);
        rate_sum *= delta;
        const double q1 = realized_covariation(panel, i1, i1, t, M);
        const double q2 = realized_covariation(panel, i2, i2, t, M);
        if (rate_sum > 0.0 && q1 >= 0.0 && q2 > 0.0) {
            pt.vol = q1 / rate_sum;
            const double rho = q2 / rate_sum;
            const double sa = std::sqrt(pt.vol);
            const double sr = std::sqrt(rho);
            pt.beta = 0.5 * sa * tau2 * sr - sa / (tau2 * sr);
            pt.valid = pt.beta < 0.0;
        }
        out.push_back(pt);
    }
    return out;
}

std::pair<double, double> fit_gbm(std::span<const double> series, double delta) {
    if (series.size() < 3) throw std::invalid_argument("fit_gbm: need at least 3 observations");
    if (!(delta > 0.0)) throw std::invalid_argument("fit_gbm: delta must be positive");
    for (double v : series) {
        if (!(v > 0.0)) throw std::domain_error("fit_gbm: series must be strictly positive");
    }
    const std::size_t n = series.size() - 1;
    double mean = 0.0;
    std::vector<double> inc(n);
    for (std::size_t i = 0; i < n; ++i) {
        inc[i] = std::log(series[i + 1] / series[i]);
        mean += inc[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : inc) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    const double sigma = std::sqrt(var / delta);
    const double mu = mean / delta + 0.5 * sigma * sigma;
    return {mu, sigma};
}

CovariationRank covariation_matrix_rank(const YieldPanel& panel, std::size_t t_index,
                                        std::size_t M, double rel_threshold) {
    panel.validate();
    const std::size_t n = panel.cols();
    if (t_index >= panel.rows() || t_index < M) {
        throw std::out_of_range("covariation_matrix_rank: window exceeds history");
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
    Eigen::VectorXd inc(static_cast<Eigen::Index>(n));
    for (std::size_t k = t_index - M + 1; k <= t_index; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            inc(static_cast<Eigen::Index>(i)) = panel.at(k, i) - panel.at(k - 1, i);
        }
        cov.selfadjointView<Eigen::Lower>().rankUpdate(inc);
    }
    cov = cov.selfadjointView<Eigen::Lower>();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    CovariationRank out;
    out.matrix.assign(cov.data(), cov.data() + n * n);
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.eigenvalues[i] = solver.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i));
    }
    const double top = out.eigenvalues.empty() ? 0.0 : out.eigenvalues.front();
    for (double ev : out.eigenvalues) {
        if (ev > rel_threshold * top) ++out.rank;
    }
    return out;
}

}  // namespace crc
