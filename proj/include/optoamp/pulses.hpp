// pulses.hpp — transitionless-driving schedules for the parametric drive

#pragma once

#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "optoamp/errors.hpp"

namespace optoamp {

enum class PulseShape { gaussian, sudden };
enum class PulseDirection { on, off };

inline PulseShape parse_pulse_shape(std::string_view s) {
    if (s == "gaussian") return PulseShape::gaussian;
    if (s == "sudden") return PulseShape::sudden;
    throw ConfigError("unknown pulse shape '" + std::string(s) + "'");
}

inline PulseDirection parse_pulse_direction(std::string_view s) {
    if (s == "on") return PulseDirection::on;
    if (s == "off") return PulseDirection::off;
    throw ConfigError("unknown pulse direction '" + std::string(s) + "'");
}

struct PulseSample {
    std::complex<double> lambda; // lambda0 + i lambda1
    double r = 0.0;
    double r_dot = 0.0;
};

// r(t) for the on-ramp is a Gaussian flank reaching r_target at tau_on, offset so that r(0) = 0
// exactly; sigma = tau_on / 5. The drive is lambda0 = Delta tanh 2r, lambda1 = -dr/dt.
// The off-ramp is the time mirror: r_off(t) = r_on(tau_on - t).
// The sudden shape jumps to r_target at t = 0 (on) or to 0 at t = 0 (off) and carries lambda1 = 0.
class PulseSchedule {
public:
    PulseSchedule(double r_target, double tau_on, PulseShape shape, double Delta, PulseDirection direction)
        : r_target_(r_target), tau_(tau_on), shape_(shape), Delta_(Delta), direction_(direction) {
        if (!(tau_on > 0.0) || !std::isfinite(tau_on)) throw ConfigError("td_schedule: tau_on must be positive");
        if (!(r_target >= 0.0) || !std::isfinite(r_target)) throw ConfigError("td_schedule: r_target must be >= 0");
        if (!(Delta > 0.0)) throw ConfigError("td_schedule: Delta must be positive");
        sigma_ = tau_on / 5.0;
        g0_ = std::exp(-tau_on * tau_on / (2.0 * sigma_ * sigma_));
    }

    double r_target() const { return r_target_; }
    double tau_on() const { return tau_; }
    double sigma() const { return sigma_; }
    double Delta() const { return Delta_; }
    PulseShape shape() const { return shape_; }
    PulseDirection direction() const { return direction_; }

    PulseSample eval(double t) const {
        if (!std::isfinite(t)) throw ConfigError("PulseSchedule::eval: non-finite time");
        double r = 0.0, rd = 0.0;
        if (shape_ == PulseShape::sudden) {
            r = (direction_ == PulseDirection::on) ? r_target_ : 0.0;
        } else if (direction_ == PulseDirection::on) {
            std::tie(r, rd) = ramp(t);
        } else {
            auto [ro, rdo] = ramp(tau_ - t);
            r = ro;
            rd = -rdo;
        }
        PulseSample s;
        s.r = r;
        s.r_dot = rd;
        const double lambda1 = (shape_ == PulseShape::sudden) ? 0.0 : -rd;
        s.lambda = {Delta_ * std::tanh(2.0 * r), lambda1};
        return s;
    }

    // Samples (t, lambda0, lambda1, r) on a uniform grid covering [0, t_end].
    std::string to_csv(std::size_t samples, double t_end = -1.0) const {
        if (samples < 2) throw ConfigError("PulseSchedule::to_csv: need at least two samples");
        if (t_end <= 0.0) t_end = tau_;
        std::ostringstream os;
        os << std::setprecision(12) << "t,lambda0,lambda1,r\n";
        for (std::size_t k = 0; k < samples; ++k) {
            const double t = t_end * double(k) / double(samples - 1);
            const auto s = eval(t);
            os << t << ',' << s.lambda.real() << ',' << s.lambda.imag() << ',' << s.r << '\n';
        }
        return os.str();
    }

private:
    std::pair<double, double> ramp(double t) const {
        if (t <= 0.0) return {0.0, 0.0};
        if (t >= tau_) return {r_target_, 0.0};
        const double u = t - tau_;
        const double G = std::exp(-u * u / (2.0 * sigma_ * sigma_));
        const double norm = r_target_ / (1.0 - g0_);
        return {norm * (G - g0_), norm * (-u / (sigma_ * sigma_)) * G};
    }

    double r_target_, tau_;
    PulseShape shape_;
    double Delta_;
    PulseDirection direction_;
    double sigma_ = 0.0, g0_ = 0.0;
};

inline PulseSchedule td_schedule(double r_target, double tau_on, PulseShape shape, double Delta,
                                 PulseDirection direction = PulseDirection::on) {
    return PulseSchedule(r_target, tau_on, shape, Delta, direction);
}

inline PulseSample eval(const PulseSchedule& s, double t) { return s.eval(t); }

// Accumulated Bogoliubov phase theta(t) = int_0^t Delta / cosh 2r(t') dt' over [0, tau_on].
// Tabulated on a uniform grid with 5-point Gauss-Legendre panels; queries integrate the last
// partial panel the same way.
class BogoliubovPhase {
public:
    explicit BogoliubovPhase(PulseSchedule pulse, std::size_t panels = 512)
        : pulse_(std::move(pulse)), h_(pulse_.tau_on() / double(panels)), table_(panels + 1, 0.0) {
        if (panels == 0) throw ConfigError("BogoliubovPhase: need at least one panel");
        for (std::size_t k = 0; k < panels; ++k)
            table_[k + 1] = table_[k] + panel(double(k) * h_, double(k + 1) * h_);
    }

    double operator()(double t) const {
        if (!std::isfinite(t)) throw ConfigError("BogoliubovPhase: non-finite time");
        if (t <= 0.0) return 0.0;
        const std::size_t last = table_.size() - 1;
        const std::size_t k = std::min(last, std::size_t(t / h_));
        const double t0 = double(k) * h_;
        if (k == last) return table_[last] + (t - t0) * pulse_.Delta() / std::cosh(2.0 * pulse_.eval(t0).r);
        return table_[k] + panel(t0, t);
    }

    const PulseSchedule& pulse() const { return pulse_; }

private:
    double panel(double a, double b) const {
        static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                        0.9061798459386640};
        static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                        0.2369268850561891, 0.2369268850561891};
        const double m = 0.5 * (a + b), hw = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < 5; ++i) acc += w[i] / std::cosh(2.0 * pulse_.eval(m + hw * x[i]).r);
        return pulse_.Delta() * hw * acc;
    }

    PulseSchedule pulse_;
    double h_;
    std::vector<double> table_;
};

} // namespace optoamp
