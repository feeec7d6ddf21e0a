#include <gtest/gtest.h>

#include <cmath>

#include "optoamp/fock.hpp"

using namespace optoamp;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

} // namespace

TEST(HilbertSpace, FlattenRoundTripIsRowMajor) {
    const auto sp = make_space({3, 4, 5}, {"a", "b", "c"});
    EXPECT_EQ(sp.dim(), 60u);
    EXPECT_EQ(sp.flatten(std::vector<std::size_t>{1, 2, 3}), 1u * 20 + 2u * 5 + 3u);
    for (std::size_t i = 0; i < sp.dim(); ++i) EXPECT_EQ(sp.flatten(sp.unflatten(i)), i);
}

TEST(HilbertSpace, RejectsBadLayouts) {
    EXPECT_THROW(make_space({3, 1}, {"a", "b"}), ConfigError);
    EXPECT_THROW(make_space({3, 3}, {"a", "a"}), ConfigError);
    EXPECT_THROW(make_space({3}, {"a", "b"}), ConfigError);
    const auto sp = make_space({3}, {"a"});
    EXPECT_THROW(sp.mode_index("zz"), ConfigError);
    EXPECT_THROW(sp.flatten(std::vector<std::size_t>{3}), ConfigError);
}

TEST(ModeOperators, CanonicalCommutatorBelowTruncationEdge) {
    const std::size_t d = 7;
    const auto sp = make_space({d, 3}, {"a", "b"});
    const auto a = mode_operator(sp, "a", ModeOp::annihilate);
    const Matrix c = commutator(a, a.adjoint()).dense();
    for (std::size_t i = 0; i < sp.dim(); ++i) {
        const double expect = (sp.digit(i, 0) + 1 < d) ? 1.0 : 1.0 - double(d);
        EXPECT_NEAR(c(Eigen::Index(i), Eigen::Index(i)).real(), expect, 1e-12);
    }
    // operators on different modes commute
    const auto b = mode_operator(sp, "b", ModeOp::annihilate);
    EXPECT_LT(commutator(a, b.adjoint()).dense().cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ModeOperators, KindsAndParsing) {
    const auto sp = make_space({4}, {"m"});
    const Matrix n = mode_operator(sp, "m", "number").dense();
    const Matrix P = mode_operator(sp, "m", "parity").dense();
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(n(k, k).real(), k, 1e-15);
        EXPECT_NEAR(P(k, k).real(), (k % 2 ? -1.0 : 1.0), 1e-15);
    }
    EXPECT_THROW(parse_mode_op("n"), ConfigError);
}

TEST(Expm, MatchesClosedFormRotation) {
    Matrix A(2, 2);
    A << 0.0, -2.0, 2.0, 0.0; // generator of rotation by angle 2
    const Matrix R = expm(A);
    EXPECT_NEAR(R(0, 0).real(), std::cos(2.0), 1e-12);
    EXPECT_NEAR(R(1, 0).real(), std::sin(2.0), 1e-12);
}

TEST(Displacement, CoherentAmplitudesMatchPoisson) {
    const std::size_t d = 40;
    const cplx alpha(0.9, -0.4);
    const Vector psi = local_displacement(d, alpha).col(0);
    for (int n = 0; n < 10; ++n) {
        const cplx want = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(factorial(n));
        EXPECT_NEAR(std::abs(psi(n) - want), 0.0, 1e-10) << n;
    }
}

TEST(Squeeze, VacuumCoefficientsAndAnnihilation) {
    const std::size_t d = 60;
    const double r = 0.6;
    const Vector psi = local_squeeze(d, r).col(0);
    for (int n = 0; n < 6; ++n) {
        const double want = std::pow(std::tanh(r), n) * std::sqrt(factorial(2 * n)) / (std::pow(2.0, n) * factorial(n)) /
                            std::sqrt(std::cosh(r));
        EXPECT_NEAR(psi(2 * n).real(), want, 1e-10);
        EXPECT_NEAR(std::abs(psi(2 * n + 1)), 0.0, 1e-12);
    }
    const auto sp = make_space({d}, {"m"});
    const Vector beta_psi = bogoliubov_operator(sp, "m", r).matrix() * psi;
    EXPECT_LT(beta_psi.head(40).norm(), 1e-9);
}

TEST(DensityMatrix, ValidatesTraceAndHermiticity) {
    const auto sp = make_space({2}, {"q"});
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.7;
    EXPECT_THROW(DensityMatrix(sp, m), InvariantError);
    m(1, 1) = 0.3;
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix(sp, m), InvariantError);
    m(1, 0) = 0.1;
    EXPECT_NO_THROW(DensityMatrix(sp, m));
    EXPECT_THROW(DensityMatrix::pure(sp, Vector::Zero(2)), ConfigError);
}

TEST(PartialTrace, ProductStateFactors) {
    const auto sp = make_space({3, 4}, {"a", "b"});
    const Matrix ta = thermal_matrix(3, 0.4);
    const Vector cb = local_displacement(4, 0.5).col(0);
    Matrix pb = cb * cb.adjoint();
    pb /= pb.trace().real();
    const auto rho = product_state(sp, {ta / ta.trace().real(), pb});
    const auto ra = partial_trace(rho, std::vector<std::string>{"a"});
    const auto rb = partial_trace(rho, std::vector<std::string>{"b"});
    EXPECT_LT((ra.matrix() - ta / ta.trace().real()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((rb.matrix() - pb).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(ra.space().labels().front(), "a");
}

TEST(ThermalMatrix, GeometricPopulations) {
    const double nbar = 0.8;
    const Matrix t = thermal_matrix(80, nbar);
    for (int n = 0; n < 5; ++n)
        EXPECT_NEAR(t(n, n).real(), std::pow(nbar, n) / std::pow(1.0 + nbar, n + 1), 1e-12);
}

TEST(RestrictState, ReportsDiscardedWeight) {
    const auto sp = make_space({3, 3}, {"a", "b"});
    Vector psi = Vector::Zero(9);
    psi(sp.flatten(std::vector<std::size_t>{0, 0})) = std::sqrt(0.9);
    psi(sp.flatten(std::vector<std::size_t>{2, 1})) = std::sqrt(0.1);
    const auto [small, lost] = restrict_state(DensityMatrix::pure(sp, psi), {2, 3});
    EXPECT_NEAR(lost, 0.1, 1e-14);
    EXPECT_EQ(small.space().dim(), 6u);
    EXPECT_NEAR(small.trace().real(), 1.0, 1e-14);
}

TEST(Expectation, NumberOfFockState) {
    const auto sp = make_space({5, 2}, {"a", "b"});
    const auto rho = DensityMatrix::pure(sp, fock_ket(sp, {3, 1}));
    EXPECT_NEAR(expectation(rho, mode_operator(sp, "a", ModeOp::number)).real(), 3.0, 1e-14);
    EXPECT_NEAR(expectation(rho, mode_operator(sp, "b", ModeOp::number)).real(), 1.0, 1e-14);
}
