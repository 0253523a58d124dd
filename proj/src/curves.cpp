#include "crc/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crc {

TimeGrid::TimeGrid(double step_, std::size_t count_) : step(step_), count(count_) {
    if (!(step > 0.0)) throw std::invalid_argument("TimeGrid: step must be positive");
    if (count < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
}

void YieldCurve::validate() const {
    if (maturities.size() != yields.size()) {
        throw std::invalid_argument("YieldCurve: maturities/yields size mismatch");
    }
    if (maturities.empty()) throw std::invalid_argument("YieldCurve: empty");
    double prev = 0.0;
    for (double m : maturities) {
        if (!(m > prev)) {
            throw std::invalid_argument("YieldCurve: maturities must be strictly increasing and positive");
        }
        prev = m;
    }
}

void ForwardCurve::validate() const {
    if (values.size() != grid.count || deriv_values.size() != grid.count) {
        throw std::invalid_argument("ForwardCurve: values/deriv_values must match grid.count");
    }
}

double ForwardCurve::value_at(double tau) const {
    if (tau < -1e-12 || tau > grid.max_time() + 1e-12) {
        throw std::out_of_range("ForwardCurve::value_at: tau outside grid");
    }
    if (tau <= 0.0) return values.front();
    const double pos = tau / grid.step;
    const auto k = static_cast<std::size_t>(std::min(pos, static_cast<double>(grid.count - 2)));
    const double w = pos - static_cast<double>(k);
    return values[k] * (1.0 - w) + values[k + 1] * w;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 knots");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: knots must increase");
    }
    // natural boundary: m_0 = m_{n-1} = 0; Thomas algorithm on the interior
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        diag[i] = (hl + hr) / 3.0;
        upper[i] = hr / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double w = (hl / 6.0) / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::interval(double x) const {
    if (x < x_.front() - 1e-12 || x > x_.back() + 1e-12) {
        throw std::out_of_range("CubicSpline: point outside knot range");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double CubicSpline::value(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

ForwardCurve yields_to_forwards(const YieldCurve& yc, const TimeGrid& grid) {
    yc.validate();
    if (yc.maturities.size() < 4) {
        throw std::invalid_argument("yields_to_forwards: need at least 4 yield points");
    }
    if (grid.max_time() > yc.maturities.back() + 1e-12) {
        throw std::out_of_range("yields_to_forwards: grid extends past the last yield maturity");
    }
    // spline g(tau) = tau * r(tau); the origin knot (0,0) pins g(0) = 0
    std::vector<double> xs, gs;
    xs.reserve(yc.maturities.size() + 1);
    gs.reserve(yc.maturities.size() + 1);
    xs.push_back(0.0);
    gs.push_back(0.0);
    for (std::size_t i = 0; i < yc.maturities.size(); ++i) {
        xs.push_back(yc.maturities[i]);
        gs.push_back(yc.maturities[i] * yc.yields[i]);
    }
    const CubicSpline spline(std::move(xs), std::move(gs));

    ForwardCurve fc;
    fc.grid = grid;
    fc.values.resize(grid.count);
    fc.deriv_values.resize(grid.count);
    for (std::size_t n = 0; n < grid.count; ++n) {
        const double tau = grid.time(n);
        fc.values[n] = spline.derivative(tau);
        fc.deriv_values[n] = spline.second_derivative(tau);
    }
    return fc;
}

double integrate_forwards(const ForwardCurve& fc, double tau) {
    fc.validate();
    if (tau < -1e-12 || tau > fc.grid.max_time() + 1e-12) {
        throw std::out_of_range("integrate_forwards: tau outside curve range");
    }
    if (tau <= 0.0) return 0.0;
    const double step = fc.grid.step;
    const double pos = tau / step;
    std::size_t full = static_cast<std::size_t>(pos);
    if (full > fc.grid.count - 1) full = fc.grid.count - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 <= full; ++k) {
        acc += 0.5 * (fc.values[k] + fc.values[k + 1]) * step;
    }
    const double rest = tau - static_cast<double>(full) * step;
    if (rest > 1e-14 && full + 1 < fc.grid.count) {
        const double w = rest / step;
        const double h_end = fc.values[full] * (1.0 - w) + fc.values[full + 1] * w;
        acc += 0.5 * (fc.values[full] + h_end) * rest;
    }
    return acc;
}

double forward_yield(const ForwardCurve& fc, double tau) {
    if (!(tau > 0.0)) throw std::out_of_range("forward_yield: maturity must be positive");
    return integrate_forwards(fc, tau) / tau;
}

YieldCurve forwards_to_yields(const ForwardCurve& fc, std::span<const double> maturities) {
    YieldCurve yc;
    yc.maturities.assign(maturities.begin(), maturities.end());
    yc.yields.reserve(maturities.size());
    for (double m : maturities) yc.yields.push_back(forward_yield(fc, m));
    yc.validate();
    return yc;
}

ForwardCurve shift(const ForwardCurve& fc, std::size_t k) {
    fc.validate();
    if (k + 1 >= fc.grid.count) {
        throw std::out_of_range("shift: shift exhausts the curve grid");
    }
    ForwardCurve out;
    out.grid = TimeGrid(fc.grid.step, fc.grid.count - k);
    out.values.assign(fc.values.begin() + static_cast<std::ptrdiff_t>(k), fc.values.end());
    out.deriv_values.assign(fc.deriv_values.begin() + static_cast<std::ptrdiff_t>(k),
                            fc.deriv_values.end());
    return out;
}

double bond_price_from_forwards(const ForwardCurve& fc, double T) {
    return std::exp(-integrate_forwards(fc, T));
}

}  // namespace crc
