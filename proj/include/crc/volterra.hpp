#pragma once

#include <utility>
#include <vector>

#include "crc/affine.hpp"
#include "crc/volterra_types.hpp"

namespace crc {

// g(tau_n) = trapezoid of int_0^{tau_n} theta(s) Psi'(tau_n - s) ds; g(0) = 0.
std::vector<double> volterra_apply(const ModelParams& p, const HullWhiteExtension& theta);

// Inverts the discrete operator above by forward substitution (the system is
// lower triangular with diagonal delta/2 * Psi'(0) = -delta/2).
//   theta(0) = g'(0) / Psi'(0) = -g'(0)
// Requires g(0) = 0.
HullWhiteExtension volterra_solve(const ModelParams& p, const TimeGrid& grid,
                                  std::span<const double> g, double g_prime0);

// Closed-form calibration operator for the Vasicek model:
//   theta(tau) = h'(tau) - beta h(tau) - a/(2 beta) (1 - e^{2 beta tau})
HullWhiteExtension calibrate_vasicek(const VasicekParams& p, const ForwardCurve& fc);

// First two extension values for the CIR model, from the curve head:
//   theta(0)     = h'(0) - beta h(0)
//   theta(delta) = (2/delta) (h(delta) + Psi'(delta) x) + Psi'(delta) theta(0)
// Requires h(0) = x (the short-end state consistency of the model).
std::pair<double, double> calibrate_cir_head(const CirParams& p, const ForwardCurve& fc,
                                             double x);

}  // namespace crc
