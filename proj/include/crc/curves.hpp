#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crc {

// Uniform grid of times to maturity tau_n = n*step, n = 0..count-1.
struct TimeGrid {
    double step = 0.0;
    std::size_t count = 0;

    TimeGrid() = default;
    TimeGrid(double step_, std::size_t count_);

    double time(std::size_t n) const { return step * static_cast<double>(n); }
    double max_time() const { return time(count - 1); }
};

// Continuously compounded zero-coupon yields keyed by time to maturity.
struct YieldCurve {
    std::vector<double> maturities;  // strictly increasing, > 0 (years)
    std::vector<double> yields;      // decimals per year

    void validate() const;
};

// Instantaneous forward rates h(tau_n) on a uniform grid together with the
// curve derivative values (dh/dtau)(tau_n). Derivatives are carried explicitly
// because the simulation loop updates them by their own closed-form recursion.
struct ForwardCurve {
    TimeGrid grid;
    std::vector<double> values;
    std::vector<double> deriv_values;

    void validate() const;
    // linear interpolation inside the grid
    double value_at(double tau) const;
};

// Natural cubic spline through (x_i, y_i); exposes value, first and second
// derivative. Shared by the curve conversions and a few analytics fixtures.
class CubicSpline {
  public:
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::size_t interval(double x) const;
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

// h = d/dtau [tau * r(tau)] from a natural cubic spline of tau*r(tau) (the
// spline passes through the origin since tau*r -> 0). deriv_values come from
// the spline's second derivative.
ForwardCurve yields_to_forwards(const YieldCurve& yc, const TimeGrid& grid);

// r(tau) = (1/tau) * integral of h over [0,tau], trapezoid on the grid with
// linear interpolation at an off-grid endpoint.
YieldCurve forwards_to_yields(const ForwardCurve& fc, std::span<const double> maturities);
double forward_yield(const ForwardCurve& fc, double tau);

// Right shift: values[n] = old values[n+k]; count shrinks by k.
ForwardCurve shift(const ForwardCurve& fc, std::size_t k);

// P(0,T) = exp(-integral of h over [0,T])
double bond_price_from_forwards(const ForwardCurve& fc, double T);

// integral of h over [0,tau] (trapezoid, partial last interval interpolated)
double integrate_forwards(const ForwardCurve& fc, double tau);

}  // namespace crc
