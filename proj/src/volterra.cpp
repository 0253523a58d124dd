#include "crc/volterra.hpp"

#include <cmath>
#include <stdexcept>

namespace crc {

namespace {

std::vector<double> kernel_values(const ModelParams& p, const TimeGrid& grid) {
    std::vector<double> k(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) k[i] = riccati(p, grid.time(i)).psi_prime;
    return k;
}

}  // namespace

std::vector<double> volterra_apply(const ModelParams& p, const HullWhiteExtension& theta) {
    theta.validate();
    const std::size_t n = theta.grid.count;
    const double delta = theta.grid.step;
    const std::vector<double> k = kernel_values(p, theta.grid);

    std::vector<double> g(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        double acc = 0.5 * (k[m] * theta.values[0] + k[0] * theta.values[m]);
        for (std::size_t i = 1; i < m; ++i) acc += k[m - i] * theta.values[i];
        g[m] = delta * acc;
    }
    return g;
}

HullWhiteExtension volterra_solve(const ModelParams& p, const TimeGrid& grid,
                                  std::span<const double> g, double g_prime0) {
    if (g.size() != grid.count) {
        throw std::invalid_argument("volterra_solve: g must be sampled on the grid");
    }
    if (std::abs(g[0]) > 1e-12) {
        throw std::invalid_argument("volterra_solve: g(0) must vanish");
    }
    const double delta = grid.step;
    const std::vector<double> k = kernel_values(p, grid);

    HullWhiteExtension theta;
    theta.grid = grid;
    theta.values.resize(grid.count);
    theta.values[0] = g_prime0 / k[0];  // k[0] = Psi'(0) = -1
    for (std::size_t m = 1; m < grid.count; ++m) {
        double acc = 0.5 * k[m] * theta.values[0];
        for (std::size_t i = 1; i < m; ++i) acc += k[m - i] * theta.values[i];
        theta.values[m] = (g[m] / delta - acc) / (0.5 * k[0]);
    }
    return theta;
}

HullWhiteExtension calibrate_vasicek(const VasicekParams& p, const ForwardCurve& fc) {
    fc.validate();
    HullWhiteExtension theta;
    theta.grid = fc.grid;
    theta.values.resize(fc.grid.count);
    for (std::size_t n = 0; n < fc.grid.count; ++n) {
        const double tau = fc.grid.time(n);
        theta.values[n] = fc.deriv_values[n] - p.beta * fc.values[n] -
                          p.a / (2.0 * p.beta) * (-std::expm1(2.0 * p.beta * tau));
    }
    return theta;
}

std::pair<double, double> calibrate_cir_head(const CirParams& p, const ForwardCurve& fc,
                                             double x) {
    fc.validate();
    if (x < 0.0) throw std::domain_error("calibrate_cir_head: factor must be >= 0");
    if (std::abs(fc.values[0] - x) > 1e-12) {
        throw std::invalid_argument("calibrate_cir_head: curve short end must equal the factor");
    }
    const double delta = fc.grid.step;
    const double theta0 = fc.deriv_values[0] - p.beta * fc.values[0];
    const double psi_prime_delta = cir_riccati(p, delta).psi_prime;
    const double theta_delta =
        2.0 / delta * (fc.values[1] + psi_prime_delta * x) + psi_prime_delta * theta0;
    return {theta0, theta_delta};
}

}  // namespace crc
