#include <gtest/gtest.h>

#include "optoamp/analytics.hpp"

using namespace optoamp;

TEST(MechanicalResponse, FrameConstruction) {
    const auto m = MechanicalResponse::from_frame(0.9, 0.3, 1e-3, 0.2);
    EXPECT_NEAR(m.r(), 0.9, 1e-12);
    EXPECT_NEAR(m.E_beta(), 0.3, 1e-12);
    MechanicalResponse bad{1.0, 1.0, 0.0, 0.0};
    EXPECT_THROW(bad.validate(), ConfigError);
}

// chi is the inverse of its defining matrix.
TEST(ChiMatrix, IsInverse) {
    const MechanicalResponse m{2.0, 1.2, 0.1, 0.0};
    const double w = 0.37;
    const std::complex<double> I(0, 1);
    Mat2c A;
    A << I * (m.Delta - w) + m.gamma / 2, -I * m.lambda, I * m.lambda, -I * (m.Delta + w) + m.gamma / 2;
    EXPECT_LT((chi_matrix(w, m) * A - Mat2c::Identity()).cwiseAbs().maxCoeff(), 1e-13);
}

// Oracle: stationary lab covariance C = <v v^dag>, v = (b, b^dag), from the frequency integral
// of chi N chi^dag with N = gamma diag(n + 1, n), then rotated into the beta frame by hand.
TEST(BetaCovariances, AgreeWithNoiseIntegral) {
    const double r = 0.5 * std::log(10.0), E = 1.0, gamma = 0.05, nbar = 0.5;
    const auto m = MechanicalResponse::from_frame(r, E, gamma, nbar);
    const auto [nn, bb] = beta_covariances(m);
    EXPECT_NEAR(nn, nbar * std::cosh(2 * r) + std::sinh(r) * std::sinh(r), 1e-12);

    const double N0 = gamma * (nbar + 1), N1 = gamma * nbar;
    double n_lab = 0.0;                  // <b^dag b>
    std::complex<double> m_lab = 0.0;    // <b b>
    const double W = 4000.0, dw = 2e-3;
    for (double w = -W; w <= W; w += dw) {
        const Mat2c c = chi_matrix(w, m);
        n_lab += (std::norm(c(1, 0)) * N0 + std::norm(c(1, 1)) * N1) * dw / (2 * M_PI);
        m_lab += (c(0, 0) * std::conj(c(1, 0)) * N0 + c(0, 1) * std::conj(c(1, 1)) * N1) * dw / (2 * M_PI);
    }
    const double ch = std::cosh(r), sh = std::sinh(r);
    const double n_beta = ch * ch * n_lab + sh * sh * (n_lab + 1) - 2 * ch * sh * m_lab.real();
    const std::complex<double> m_beta = ch * ch * m_lab + sh * sh * std::conj(m_lab) - ch * sh * (2 * n_lab + 1);
    EXPECT_NEAR(n_beta, nn, 1e-3 * nn);
    EXPECT_NEAR(m_beta.real(), bb.real(), 1e-3 * std::abs(bb));
    EXPECT_NEAR(m_beta.imag(), bb.imag(), 1e-3 * std::abs(bb));
    EXPECT_GT(bb.imag(), 0.0);
}

TEST(BetaCovariances, AnomalousTermVanishesWithoutSqueezing) {
    const auto [nn, bb] = beta_covariances(MechanicalResponse::from_frame(0.0, 1.0, 0.1, 0.3));
    EXPECT_NEAR(nn, 0.3, 1e-14);
    EXPECT_NEAR(std::abs(bb), 0.0, 1e-14);
}

TEST(Greens, RetardedPoleAtBogoliubovEnergy) {
    const auto m = MechanicalResponse::from_frame(1.0, 0.8, 1e-3, 0.0);
    const double on = std::abs(greens_retarded(0.8, m).first);
    const double off = std::abs(greens_retarded(0.5, m).first);
    EXPECT_GT(on, 100.0 * off);
}

// Causality: G^R(t) vanishes for t < 0.
TEST(Greens, RetardedIsCausal) {
    const auto m = MechanicalResponse::from_frame(0.5, 1.0, 0.2, 0.0);
    std::vector<double> w;
    std::vector<std::complex<double>> F;
    for (double x = -200.0; x <= 200.0; x += 0.01) {
        w.push_back(x);
        F.push_back(greens_retarded(x, m).first);
    }
    const auto past = inverse_fourier(w, F, {-5.0, -2.0}, 150.0);
    const auto future = inverse_fourier(w, F, {2.0}, 150.0);
    EXPECT_LT(std::abs(past[0]), 0.01 * std::abs(future[0]));
    EXPECT_LT(std::abs(past[1]), 0.01 * std::abs(future[0]));
}

TEST(Greens, KeldyshIsAntiHermitian) {
    const auto m = MechanicalResponse::from_frame(1.0, 1.0, 0.05, 0.4);
    for (double w : {-1.3, 0.0, 0.9, 1.0}) EXPECT_LT(greens_keldysh(w, m).first.imag(), 0.0);
}

TEST(HeatingRate, ScalingAndValidation) {
    const double a = heating_rate(1e-3, 0.1, 0.5, 1.0, 0.0, 1.0);
    EXPECT_NEAR(heating_rate(1e-3, 0.1, 0.5, 2.0, 0.0, 1.0) / a, std::exp(4.0), 1e-9);
    EXPECT_NEAR(heating_rate(1e-3, 0.1, 0.5, 1.0, 1.0, 1.0) / a, 3.0, 1e-12);
    EXPECT_NEAR(heating_rate(1e-3, 0.1, 0.5, 1.0, 0.0, 2.0) / a, 2.0, 1e-12);
    EXPECT_THROW(heating_rate(1e-3, 0.1, 0.0, 1.0, 0.0, 1.0), ConfigError);
}

TEST(InverseFourier, LorentzianToExponential) {
    // F(w) = 1/(gamma/2 - i w) <-> f(t) = exp(-gamma t / 2) for t > 0
    const double g = 1.0;
    std::vector<double> w;
    std::vector<std::complex<double>> F;
    for (double x = -400.0; x <= 400.0; x += 0.005) {
        w.push_back(x);
        F.push_back(1.0 / std::complex<double>(g / 2, -x));
    }
    const auto f = inverse_fourier(w, F, {1.0, 3.0}, 1e9);
    EXPECT_NEAR(f[0].real(), std::exp(-0.5), 2e-3);
    EXPECT_NEAR(f[1].real(), std::exp(-1.5), 2e-3);
    EXPECT_THROW(inverse_fourier({1.0}, {1.0}, {0.0}, 1.0), ConfigError);
}
