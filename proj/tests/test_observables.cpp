#include <gtest/gtest.h>

#include "optoamp/observables.hpp"

using namespace optoamp;

namespace {

DensityMatrix single(std::size_t d, const Vector& psi) {
    return DensityMatrix::pure(make_space({d}, {"m"}), psi / psi.norm());
}

} // namespace

TEST(G2, FockCoherentThermal) {
    const std::size_t d = 60;
    const auto sp = make_space({d}, {"m"});
    EXPECT_NEAR(g2_zero(DensityMatrix::pure(sp, fock_ket(sp, {3})), "m"), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(g2_zero(single(d, local_displacement(d, cplx(1.1, 0.3)).col(0)), "m"), 1.0, 1e-9);
    const Matrix th = thermal_matrix(d, 0.5);
    EXPECT_NEAR(g2_zero(DensityMatrix(sp, th / th.trace().real()), "m"), 2.0, 1e-9);
    EXPECT_THROW(g2_zero(DensityMatrix::pure(sp, fock_ket(sp, {0})), "m"), UndefinedObservable);
}

// Squeezed vacuum: g2 = 3 + 1/sinh^2 r.
TEST(G2, SqueezedVacuumClosedForm) {
    const double r = 0.5;
    const auto rho = single(80, local_squeeze(80, r).col(0));
    const double s2 = std::sinh(r) * std::sinh(r);
    EXPECT_NEAR(g2_zero(rho, "m"), 3.0 + 1.0 / s2, 1e-8);
}

TEST(G2Gaussian, AgreesWithExactForDisplacedSqueezedState) {
    const std::size_t d = 80;
    const Vector psi = local_displacement(d, cplx(0.8, -0.2)) * local_squeeze(d, 0.35).col(0);
    const auto rho = single(d, psi);
    const auto a = mode_operator(rho.space(), "m", ModeOp::annihilate);
    const auto m = extract_moments(rho, a);
    EXPECT_NEAR(g2_gaussian(m), g2_zero(rho, a), 1e-9);
}

TEST(G2Gaussian, RejectsUnphysicalMoments) {
    GaussianMoments m;
    m.occupation = 0.1;
    m.anomalous = 1.0;
    EXPECT_THROW(g2_gaussian(m), ConfigError);
    m.anomalous = 0.0;
    m.mean = 1.0;
    EXPECT_THROW(g2_gaussian(m), ConfigError);
}

TEST(Wigner, VacuumAndFockOne) {
    const auto sp = make_space({20}, {"m"});
    EXPECT_NEAR(wigner_point(DensityMatrix::pure(sp, fock_ket(sp, {0})), 0.0, 0.0), 1.0 / M_PI, 1e-12);
    EXPECT_NEAR(wigner_point(DensityMatrix::pure(sp, fock_ket(sp, {1})), 0.0, 0.0), -1.0 / M_PI, 1e-12);
    // W_1(x, p) = (2(x^2 + p^2) - 1) exp(-(x^2 + p^2)) / pi
    const double x = 0.7, p = -0.4, q = x * x + p * p;
    EXPECT_NEAR(wigner_point(DensityMatrix::pure(sp, fock_ket(sp, {1})), x, p), (2 * q - 1) * std::exp(-q) / M_PI, 1e-12);
}

TEST(Wigner, CoherentStateIsDisplacedGaussianAndNormalized) {
    const std::size_t d = 40;
    const cplx alpha(1.0, 0.5);
    const auto rho = single(d, local_displacement(d, alpha).col(0));
    const auto w = wigner(rho, linspace(-4, 6, 81), linspace(-4, 5, 73));
    EXPECT_NEAR(w.integral(), 1.0, 1e-6);
    const double x0 = std::sqrt(2.0) * alpha.real(), p0 = std::sqrt(2.0) * alpha.imag();
    EXPECT_NEAR(wigner_point(rho, x0, p0), 1.0 / M_PI, 1e-9);
    EXPECT_NEAR(wigner_point(rho, x0 + 0.5, p0), std::exp(-0.25) / M_PI, 1e-9);
    EXPECT_GT(w.min(), -1e-10);
}

TEST(Wigner, RefusesPointsBeyondTruncation) {
    const auto sp = make_space({4}, {"m"});
    EXPECT_THROW(wigner_point(DensityMatrix::pure(sp, fock_ket(sp, {0})), 10.0, 0.0), TruncationError);
}

TEST(Fidelity, PureStatesGiveOverlap) {
    const std::size_t d = 30;
    const Vector a = local_displacement(d, 0.4).col(0), b = local_displacement(d, -0.3).col(0);
    const auto ra = single(d, a), rb = single(d, b);
    EXPECT_NEAR(fidelity(ra, rb), std::exp(-0.49), 1e-7);
    EXPECT_NEAR(fidelity(ra, ra), 1.0, 1e-7);
}

TEST(BetaPopulation, ZeroOnBetaVacuum) {
    const double r = 0.8;
    const auto rho = single(100, local_squeeze(100, r).col(0));
    EXPECT_LT(beta_population(rho, r, "m"), 1e-9);
    EXPECT_NEAR(beta_population(rho, 0.0, "m"), std::sinh(r) * std::sinh(r), 1e-8);
}

TEST(QuadratureDensity, VacuumGaussian) {
    const auto sp = make_space({10}, {"m"});
    const auto rho = DensityMatrix::pure(sp, fock_ket(sp, {0}));
    for (double x : {0.0, 0.6, -1.2}) EXPECT_NEAR(quadrature_density(rho, x), std::exp(-x * x) / std::sqrt(M_PI), 1e-12);
}
