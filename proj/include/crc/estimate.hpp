#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace crc {

// Daily panel of market (or simulated) yields r(t_n, tau_i). Rows are
// business days spaced by the configured delta; missing quotes are NaN and
// invalidate any window containing them.
struct YieldPanel {
    std::vector<std::string> dates;       // ISO-8601, strictly increasing
    std::vector<double> maturities;       // tau_i, strictly increasing
    std::vector<double> yields;           // row-major [date][maturity]

    std::size_t rows() const { return dates.size(); }
    std::size_t cols() const { return maturities.size(); }
    double at(std::size_t t, std::size_t i) const { return yields[t * cols() + i]; }
    std::size_t maturity_index(double tau) const;
    void validate() const;
};

// Sum over the last M increments of dr(tau_i) * dr(tau_j) ending at t_index.
double realized_covariation(const YieldPanel& panel, std::size_t i, std::size_t j,
                            std::size_t t_index, std::size_t M);

struct EstimatePoint {
    std::size_t t_index;
    double vol = 0.0;   // a_hat (Vasicek) or alpha_hat (CIR)
    double beta = 0.0;  // beta_hat
    bool valid = false;
};

// Rolling-window estimators from realized covariations:
//   a_hat(t)    = Q1(t) / (delta M)
//   beta_hat(t) = -(1/tau2) sqrt(delta M a_hat(t) / Q2(t))
// with Qk the windowed covariation of the tau_k yield.
std::vector<EstimatePoint> estimate_vasicek(const YieldPanel& panel, double tau1, double tau2,
                                            std::size_t M, double delta);

// CIR versions:
//   alpha_hat(t) = Q1(t) / (delta sum_{m=0}^{M-1} r(t - m delta, tau1))
//   beta_hat(t)  = sqrt(alpha)/2 tau2 sqrt(rho) - sqrt(alpha)/tau2 / sqrt(rho),
//                  rho = Q2(t) / (delta sum r(t - m delta, tau1))
std::vector<EstimatePoint> estimate_cir(const YieldPanel& panel, double tau1, double tau2,
                                        std::size_t M, double delta);

// Log-return MLE for a geometric Brownian motion observed at spacing delta:
// sigma = sqrt(var(log increments)/delta), mu = mean/delta + sigma^2/2.
std::pair<double, double> fit_gbm(std::span<const double> series, double delta);

struct CovariationRank {
    std::vector<double> matrix;       // row-major cols() x cols()
    std::vector<double> eigenvalues;  // descending
    std::size_t rank = 0;
};

// Windowed covariation matrix over all panel maturities; rank counts
// eigenvalues above rel_threshold times the largest.
CovariationRank covariation_matrix_rank(const YieldPanel& panel, std::size_t t_index,
                                        std::size_t M, double rel_threshold = 1e-6);

}  // namespace crc
