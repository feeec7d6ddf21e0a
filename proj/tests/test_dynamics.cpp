#include <gtest/gtest.h>

#include <random>

#include "optoamp/dynamics.hpp"
#include "optoamp/observables.hpp"

using namespace optoamp;

namespace {

DensityMatrix random_state(const HilbertSpace& sp, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    const auto d = static_cast<Eigen::Index>(sp.dim());
    Matrix G(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) G(i, j) = cplx(nd(rng), nd(rng));
    Matrix rho = G * G.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(sp, rho);
}

} // namespace

TEST(Liouvillian, SuperoperatorMatchesDirectAction) {
    const auto sp = make_space({3, 4}, {"a", "b"});
    const auto a = mode_operator(sp, "a", ModeOp::annihilate);
    const auto b = mode_operator(sp, "b", ModeOp::annihilate);
    const Operator H = 0.7 * (a.adjoint() * a) + 0.2 * (a.adjoint() * b + b.adjoint() * a) + 0.1 * (b * b + b.adjoint() * b.adjoint());
    const auto L = build_liouvillian(H, {make_dissipator(a, 0.3), make_dissipator(b.adjoint(), 0.05)});
    const auto rho = random_state(sp, 3);
    const Matrix direct = L(rho.matrix());
    Matrix herm;
    L.apply_hermitian(rho.matrix(), herm);
    const auto d = static_cast<Eigen::Index>(sp.dim());
    const Vector v = L.superoperator() * Eigen::Map<const Vector>(rho.matrix().data(), d * d);
    EXPECT_LT((Eigen::Map<const Matrix>(v.data(), d, d) - direct).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((herm - direct).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(std::abs(direct.trace()), 1e-12);
}

TEST(Liouvillian, RejectsNegativeRates) {
    const auto sp = make_space({3}, {"a"});
    EXPECT_THROW(make_dissipator(mode_operator(sp, "a", ModeOp::annihilate), -1.0), ConfigError);
}

// Free decay: <n>(t) = n0 exp(-kappa t).
TEST(Evolve, EnergyDecayIsExponential) {
    const auto sp = make_space({8}, {"a"});
    const auto a = mode_operator(sp, "a", ModeOp::annihilate);
    const auto L = build_liouvillian(1.3 * (a.adjoint() * a), {make_dissipator(a, 0.4)});
    const auto rho0 = DensityMatrix::pure(sp, fock_ket(sp, {3}));
    const std::vector<double> ts{0.0, 0.5, 1.0, 2.5};
    const auto tr = evolve(rho0, L, ts, {{"n", a.adjoint() * a}});
    for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_NEAR(tr.series("n")[i].real(), 3.0 * std::exp(-0.4 * ts[i]), 1e-7);
    EXPECT_LT(tr.max_trace_drift, 1e-10);
    EXPECT_NO_THROW(tr.final_state());
    EXPECT_THROW(tr.series("x"), ConfigError);
}

// A driven damped cavity relaxes to the coherent state alpha = -i eps / (kappa/2 + i Delta).
TEST(SteadyState, DrivenCavityIsCoherent) {
    const double Delta = 0.6, eps = 0.3, kappa = 1.0;
    const auto sp = make_space({20}, {"a"});
    const auto a = mode_operator(sp, "a", ModeOp::annihilate);
    const auto L = build_liouvillian(Delta * (a.adjoint() * a) + eps * (a + a.adjoint()), {make_dissipator(a, kappa)});
    const cplx alpha = cplx(0.0, -eps) / cplx(kappa / 2, Delta);
    const Vector coh = local_displacement(20, alpha).col(0);
    const auto want = DensityMatrix::pure(sp, coh / coh.norm());
    const auto ss = steady_state(L);
    EXPECT_GT(fidelity(ss, want), 1 - 1e-10);

    // the sector-preconditioned Krylov path agrees with the direct solve
    SteadyStateOptions so;
    so.charge = number_charge(sp, {"a"});
    EXPECT_GT(fidelity(steady_state(L, so), want), 1 - 1e-9);
}

TEST(SteadyState, ThermalBathGivesThermalState) {
    const double nbar = 0.7;
    const auto sp = make_space({40}, {"m"});
    const auto b = mode_operator(sp, "m", ModeOp::annihilate);
    const auto L = build_liouvillian(b.adjoint() * b, thermal_dissipators(sp, "m", 0.2, nbar));
    const auto ss = steady_state(L);
    const Matrix th = thermal_matrix(40, nbar);
    EXPECT_LT((ss.matrix() - th / th.trace().real()).cwiseAbs().maxCoeff(), 1e-9);
}

// The frame-transformed jump cosh(r) beta + sinh(r) beta^dag is b again: building beta out of b
// and substituting must give back the lab operator away from the truncation edge.
TEST(FrameDissipators, JumpsReduceToLabOperators) {
    const double r = 0.4;
    const auto sp = make_space({30}, {"m"});
    const auto beta = bogoliubov_operator(sp, "m", r);
    const auto b = mode_operator(sp, "m", ModeOp::annihilate);
    const auto dis = frame_transformed_mech_dissipators(sp, "m", 1.0, 0.3, r);
    ASSERT_EQ(dis.size(), 2u);
    EXPECT_NEAR(dis[0].rate, 1.3, 1e-15);
    EXPECT_NEAR(dis[1].rate, 0.3, 1e-15);
    const Operator b_again = std::cosh(r) * beta + std::sinh(r) * beta.adjoint();
    EXPECT_LT((b_again.dense() - b.dense()).topLeftCorner(20, 20).cwiseAbs().maxCoeff(), 1e-12);
}

// Time-independent H: the integrator reproduces exp(-iHt).
TEST(EvolveKet, MatchesMatrixExponential) {
    const auto sp = make_space({6, 3}, {"a", "b"});
    const auto a = mode_operator(sp, "a", ModeOp::annihilate);
    const auto b = mode_operator(sp, "b", ModeOp::annihilate);
    const Operator H = 0.5 * (a.adjoint() * a) + 0.3 * (a.adjoint() * b + b.adjoint() * a);
    const Vector psi0 = fock_ket(sp, {2, 1});
    const Vector got = evolve_ket(psi0, TimeDependentOperator(H), 0.0, 2.0);
    const Vector want = expm(Matrix(cplx(0.0, -2.0) * H.dense())) * psi0;
    EXPECT_LT((got - want).norm(), 1e-7);
}

// Resonant Rabi drive with a time-dependent amplitude: populations follow sin^2 of the pulse area.
TEST(EvolveKet, PulseAreaRotation) {
    const auto sp = make_space({2}, {"q"});
    const auto s = mode_operator(sp, "q", ModeOp::annihilate);
    TimeDependentOperator H(Operator::zero(sp));
    H.add([](double t) { return cplx(t, 0.0); }, s + s.adjoint());
    const Vector psi = evolve_ket(fock_ket(sp, {0}), H, 0.0, 1.5);
    // area = int_0^1.5 t dt = 1.125
    EXPECT_NEAR(std::norm(psi(1)), std::pow(std::sin(1.125), 2), 1e-7);
}

TEST(TimeDependentLiouvillian, RebuildsGenerator) {
    const auto sp = make_space({10}, {"a"});
    const auto a = mode_operator(sp, "a", ModeOp::annihilate);
    // kappa(t) = 2t: n(t) = n0 exp(-t^2)
    TimeDependentLiouvillian L([&](double t) { return build_liouvillian(Operator::zero(sp), {make_dissipator(a, 2.0 * t)}); });
    const std::vector<double> ts{0.0, 1.0};
    const auto tr = evolve(DensityMatrix::pure(sp, fock_ket(sp, {2})), L, ts, {{"n", a.adjoint() * a}});
    EXPECT_NEAR(tr.series("n").back().real(), 2.0 * std::exp(-1.0), 1e-6);
}

TEST(FrameDissipators, RotatingPhaseConjugatesLikeBeta) {
    const auto sp = make_space({6}, {"m"});
    const double r = 0.4, phi = 0.7;
    const auto d0 = frame_transformed_mech_dissipators(sp, "m", 0.1, 0.5, r);
    const auto d1 = frame_transformed_mech_dissipators(sp, "m", 0.1, 0.5, r, phi);
    // U J U^dag with U = exp(i phi n) equals the rotated jump up to a global phase
    const Matrix U = Matrix(mode_operator(sp, "m", ModeOp::number).matrix()).diagonal().unaryExpr(
        [&](cplx n) { return std::exp(cplx(0.0, phi) * n); }).asDiagonal();
    for (std::size_t k = 0; k < d0.size(); ++k) {
        const Matrix a = U * Matrix(d0[k].jump.matrix()) * U.adjoint();
        const Matrix b = Matrix(d1[k].jump.matrix());
        const cplx ph = (b.array() * a.array().conjugate()).sum() / a.squaredNorm();
        EXPECT_NEAR(std::abs(ph), 1.0, 1e-12);
        EXPECT_LT((a * ph - b).norm(), 1e-12);
    }
}
