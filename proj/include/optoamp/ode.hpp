// ode.hpp — adaptive Dormand–Prince 5(4) integrator for Eigen-valued states

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <vector>

#include "optoamp/errors.hpp"

namespace optoamp {

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 0.0; // 0 -> heuristic
    double max_step = 0.0;     // 0 -> unlimited
    double min_step = 1e-14;   // relative to the integration span
    std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
    double last_step = 0.0;
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, double rtol, double atol) {
    double worst = 0.0;
    const auto n = err.size();
    const auto* e = err.data();
    const auto* a = y0.data();
    const auto* b = y1.data();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
        worst = std::max(worst, std::abs(e[i]) / sc);
    }
    return worst;
}

} // namespace detail

// Integrates dy/dt = f(t, y) through the strictly increasing `t_grid`, calling
// `on_output(k, t_grid[k], y)` at each grid point (including the first, where y = y0).
// `f` has signature void(double t, const State& y, State& dydt).
template <class State, class Rhs, class Output>
IntegratorStats integrate(Rhs&& f, State y, std::span<const double> t_grid, Output&& on_output,
                          const IntegratorOptions& opt = {}) {
    IntegratorStats stats;
    if (t_grid.empty()) return stats;
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw ConfigError("integrate: output times must be strictly increasing");

    // Dormand–Prince coefficients
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t_grid.front();
    on_output(std::size_t{0}, t, y);
    if (t_grid.size() == 1) return stats;

    const double span = t_grid.back() - t_grid.front();
    const double h_floor = opt.min_step * std::max(1.0, span);

    State k1, k2, k3, k4, k5, k6, k7, tmp, ynew, err;
    f(t, y, k1);
    ++stats.evaluations;

    double h = opt.initial_step;
    if (h <= 0.0) {
        const double yn = y.cwiseAbs().maxCoeff();
        const double fn = k1.cwiseAbs().maxCoeff();
        h = (fn > 0.0) ? 0.01 * std::max(yn, opt.atol / opt.rtol) / fn : 1e-6 * span;
        h = std::min(h, 0.01 * span);
        h = std::max(h, h_floor * 10);
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        const double t_end = t_grid[k];
        while (t < t_end) {
            if (stats.accepted + stats.rejected > opt.max_steps)
                throw StiffnessError("integrate: step budget exhausted at t=" + std::to_string(t));
            bool last = false;
            double hs = h;
            if (t + hs >= t_end || t_end - (t + hs) < 1e-12 * std::max(1.0, std::abs(t_end))) {
                hs = t_end - t;
                last = true;
            }
            tmp = y + hs * a21 * k1;
            f(t + c2 * hs, tmp, k2);
            tmp = y + hs * (a31 * k1 + a32 * k2);
            f(t + c3 * hs, tmp, k3);
            tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
            f(t + c4 * hs, tmp, k4);
            tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            f(t + c5 * hs, tmp, k5);
            tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            f(t + hs, tmp, k6);
            ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            f(t + hs, ynew, k7);
            stats.evaluations += 6;
            err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double en = detail::scaled_error(err, y, ynew, opt.rtol, opt.atol);

            if (std::isfinite(en) && en <= 1.0) {
                t = last ? t_end : t + hs;
                y.swap(ynew);
                k1.swap(k7);
                ++stats.accepted;
                stats.last_step = hs;
                const double fac = (en == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
                if (!last) h = hs * fac;
                else h = std::max(h, hs) * std::min(fac, 1.0);
            } else {
                ++stats.rejected;
                const double fac = std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.25), 0.1, 0.9) : 0.1;
                h = hs * fac;
                if (h < h_floor) {
                    std::ostringstream os;
                    os << "integrate: step size underflow (h=" << h << ") at t=" << t << ", error norm " << en
                       << ", accepted " << stats.accepted << ", rejected " << stats.rejected;
                    throw StiffnessError(os.str());
                }
            }
            if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        }
        on_output(k, t_end, y);
    }
    return stats;
}

} // namespace optoamp
