// optimize.hpp — bounded derivative-free minimization (Nelder–Mead with bound reflection)

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "optoamp/errors.hpp"

namespace optoamp {

struct NelderMeadOptions {
    std::size_t max_iterations = 200;
    double ftol = 1e-3;            // spread of f over the simplex
    double xtol = 1e-4;            // relative simplex size
    std::vector<double> step;      // initial simplex offsets; default 10% of each coordinate
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = std::numeric_limits<double>::infinity();
    std::vector<double> seed;
    double f_seed = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// Mirror a coordinate back into [lo, hi].
inline double reflect_into(double v, double lo, double hi) {
    if (!(hi > lo)) return lo;
    for (int k = 0; k < 8 && (v < lo || v > hi); ++k) v = (v < lo) ? 2 * lo - v : 2 * hi - v;
    return std::clamp(v, lo, hi);
}

} // namespace detail

// Minimizes f over the box [lo, hi]. Non-finite objective values count as +inf.
// The returned point is never worse than the seed.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> seed, const std::vector<double>& lo,
                                    const std::vector<double>& hi, const NelderMeadOptions& opt = {}) {
    const std::size_t n = seed.size();
    if (n == 0 || lo.size() != n || hi.size() != n) throw ConfigError("nelder_mead: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lo[i] <= hi[i])) throw ConfigError("nelder_mead: empty bound interval");
        seed[i] = std::clamp(seed[i], lo[i], hi[i]);
    }
    NelderMeadResult res;
    auto eval = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = detail::reflect_into(x[i], lo[i], hi[i]);
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> pts(n + 1, seed);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double s = (opt.step.size() == n) ? opt.step[i] : 0.1 * std::max(std::abs(seed[i]), 1e-3);
        if (seed[i] + s > hi[i]) s = -s;
        pts[i + 1][i] += s;
    }
    for (std::size_t k = 0; k <= n; ++k) fv[k] = eval(pts[k]);
    res.seed = pts[0];
    res.f_seed = fv[0];

    std::vector<std::size_t> order(n + 1);
    auto sort = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    };
    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        sort();
        const auto best = order.front(), worst = order.back(), second = order[n - 1];
        double size = 0.0;
        for (std::size_t k = 0; k <= n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                size = std::max(size, std::abs(pts[k][i] - pts[best][i]) / std::max(1e-12, hi[i] - lo[i]));
        if (std::isfinite(fv[worst]) && fv[worst] - fv[best] < opt.ftol && size < opt.xtol * 100) {
            res.converged = true;
            break;
        }
        if (size < opt.xtol) {
            res.converged = std::isfinite(fv[worst]) && fv[worst] - fv[best] < opt.ftol;
            break;
        }
        std::vector<double> c(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k)
            if (k != worst)
                for (std::size_t i = 0; i < n; ++i) c[i] += pts[k][i] / double(n);
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = c[i] + t * (pts[worst][i] - c[i]);
            return x;
        };
        auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) { pts[worst] = xe; fv[worst] = fe; }
            else { pts[worst] = xr; fv[worst] = fr; }
        } else if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
        } else {
            auto xc = (fr < fv[worst]) ? along(-0.5) : along(0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == best) continue;
                    for (std::size_t i = 0; i < n; ++i) pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
                    fv[k] = eval(pts[k]);
                }
            }
        }
    }
    sort();
    res.x = pts[order.front()];
    res.f = fv[order.front()];
    if (!(res.f <= res.f_seed)) {
        res.x = res.seed;
        res.f = res.f_seed;
    }
    return res;
}

} // namespace optoamp
