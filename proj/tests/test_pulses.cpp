#include <gtest/gtest.h>

#include "optoamp/pulses.hpp"

using namespace optoamp;

TEST(PulseSchedule, OnRampEndpoints) {
    const auto s = td_schedule(2.0, 0.4, PulseShape::gaussian, 5.0);
    EXPECT_NEAR(s.eval(0.0).r, 0.0, 1e-15);
    EXPECT_NEAR(s.eval(0.4).r, 2.0, 1e-15);
    EXPECT_NEAR(s.eval(10.0).r, 2.0, 1e-15);
    EXPECT_NEAR(s.eval(0.4).lambda.real(), 5.0 * std::tanh(4.0), 1e-12);
}

// lambda1 = -dr/dt, checked against a central difference.
TEST(PulseSchedule, CounterdiabaticTermIsMinusRdot) {
    const auto s = td_schedule(1.3, 1.0, PulseShape::gaussian, 2.0);
    const double h = 1e-6;
    for (double t : {0.1, 0.37, 0.5, 0.81, 0.95}) {
        const double rd = (s.eval(t + h).r - s.eval(t - h).r) / (2 * h);
        EXPECT_NEAR(s.eval(t).lambda.imag(), -rd, 1e-6) << t;
        EXPECT_NEAR(s.eval(t).r_dot, rd, 1e-6) << t;
    }
}

TEST(PulseSchedule, MonotoneOnRamp) {
    const auto s = td_schedule(1.0, 1.0, PulseShape::gaussian, 2.0);
    double prev = -1.0;
    for (int k = 0; k <= 100; ++k) {
        const double r = s.eval(k / 100.0).r;
        EXPECT_GE(r, prev);
        prev = r;
    }
}

TEST(PulseSchedule, OffRampMirrorsOnRamp) {
    const auto on = td_schedule(1.5, 0.8, PulseShape::gaussian, 3.0, PulseDirection::on);
    const auto off = td_schedule(1.5, 0.8, PulseShape::gaussian, 3.0, PulseDirection::off);
    for (double t : {0.0, 0.2, 0.45, 0.8}) {
        EXPECT_NEAR(off.eval(t).r, on.eval(0.8 - t).r, 1e-14);
        EXPECT_NEAR(off.eval(t).lambda.imag(), -on.eval(0.8 - t).lambda.imag(), 1e-12);
    }
}

TEST(PulseSchedule, SuddenShape) {
    const auto on = td_schedule(1.5, 0.8, PulseShape::sudden, 3.0);
    EXPECT_DOUBLE_EQ(on.eval(0.0).r, 1.5);
    EXPECT_DOUBLE_EQ(on.eval(0.3).lambda.imag(), 0.0);
    const auto off = td_schedule(1.5, 0.8, PulseShape::sudden, 3.0, PulseDirection::off);
    EXPECT_DOUBLE_EQ(off.eval(0.3).r, 0.0);
}

TEST(PulseSchedule, RejectsBadParameters) {
    EXPECT_THROW(td_schedule(1.0, 0.0, PulseShape::gaussian, 1.0), ConfigError);
    EXPECT_THROW(td_schedule(-1.0, 1.0, PulseShape::gaussian, 1.0), ConfigError);
    EXPECT_THROW(td_schedule(1.0, 1.0, PulseShape::gaussian, 0.0), ConfigError);
    EXPECT_THROW(parse_pulse_shape("square"), ConfigError);
    EXPECT_THROW(parse_pulse_direction("up"), ConfigError);
}

TEST(PulseSchedule, CsvHasHeaderAndRows) {
    const auto s = td_schedule(1.0, 1.0, PulseShape::gaussian, 2.0);
    const std::string csv = s.to_csv(5);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,lambda0,lambda1,r");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(BogoliubovPhase, MatchesDirectQuadrature) {
    const auto on = td_schedule(1.2, 0.5, PulseShape::gaussian, 7.0);
    const BogoliubovPhase theta(on);
    EXPECT_DOUBLE_EQ(theta(0.0), 0.0);
    // trapezoid on a fine grid as an independent reference
    for (double t : {0.013, 0.25, 0.5}) {
        const int n = 200000;
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double f = 7.0 / std::cosh(2.0 * on.eval(t * k / n).r);
            acc += (k == 0 || k == n) ? 0.5 * f : f;
        }
        EXPECT_NEAR(theta(t), acc * t / n, 1e-8);
    }
    // constant r after the ramp: the phase grows at Delta / cosh 2r
    EXPECT_NEAR(theta(0.6) - theta(0.5), 0.1 * 7.0 / std::cosh(2.4), 1e-12);
}
