// scenarios/validate.hpp — fast invariant suite over all modules

#pragma once

#include <Eigen/Eigenvalues>

#include <random>

#include "optoamp/analytics.hpp"
#include "optoamp/models.hpp"
#include "optoamp/scenarios/common.hpp"

namespace optoamp {

struct ValidateParams {
    std::uint64_t seed = 12345;
    std::size_t thermometry_n_mech = 80;
    std::size_t td_n_mech = 100;
    std::size_t polaron_n_mech = 30;
    std::size_t frame_n_mech_lab = 80;
    double omega_fast = 100.0; // in units of E_beta
    std::size_t rwa_n_mech = 30;

    static ValidateParams read(const Config& c) {
        ValidateParams p;
        p.seed = static_cast<std::uint64_t>(c.get_int("validate.seed", static_cast<long>(p.seed)));
        p.thermometry_n_mech = c.get_size("validate.thermometry_n_mech", p.thermometry_n_mech);
        p.td_n_mech = c.get_size("validate.td_n_mech", p.td_n_mech);
        p.polaron_n_mech = c.get_size("validate.polaron_n_mech", p.polaron_n_mech);
        p.frame_n_mech_lab = c.get_size("validate.frame_n_mech_lab", p.frame_n_mech_lab);
        p.omega_fast = c.get_double("validate.omega_fast", p.omega_fast);
        p.rwa_n_mech = c.get_size("validate.rwa_n_mech", p.rwa_n_mech);
        return p;
    }
};

namespace validation {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random valid density matrix (Wishart-like, full rank).
inline DensityMatrix random_state(const HilbertSpace& sp, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    const auto d = Eigen::Index(sp.dim());
    Matrix A(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) A(i, j) = cplx(nd(rng), nd(rng));
    Matrix rho = A * A.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(sp, 0.5 * (rho + rho.adjoint()));
}

// Tr L[rho] = 0 and L[rho] Hermitian for a generic generator and state.
inline void generator_structure(ScenarioResult& res, std::mt19937_64& rng) {
    const auto sp = make_space({3, 3, 5}, {"cav1", "cav2", "mech"});
    const auto f = frame_from_dB(20.0, 1.0, 0.1);
    const Operator H = to_rotating_frame(build_h_srp(sp, 0.1, f), 0.05, -f.Lambda);
    auto diss = cavity_dissipators(sp, 1.0);
    for (auto& d : frame_transformed_mech_dissipators(sp, "mech", 0.01, 0.5, 0.7)) diss.push_back(d);
    const Liouvillian L(H, diss);
    const auto rho = random_state(sp, rng);
    const Matrix out = L(rho.matrix());
    const double tr = std::abs(out.trace());
    const double herm = (out - out.adjoint()).cwiseAbs().maxCoeff();
    res.check("liouvillian.trace_preserving", tr < 1e-10, tr, 1e-10);
    res.check("liouvillian.hermiticity_preserving", herm < 1e-10, herm, 1e-10);
    res.check("hamiltonian.hermitian", H.is_hermitian(), H.hermiticity_defect(), 1e-12);
}

// Spectrum of E beta^dag beta + g~(a2^dag a1 + h.c.)(beta + beta^dag) in the sector with at most
// two photons against the diagonal polaron form E n_beta - Lambda (n_s - n_a)^2.
inline void polaron_equivalence(ScenarioResult& res, std::size_t n_mech) {
    const double g = 0.1;
    const auto f = frame_from_dB(20.0, 1.0, g);
    const auto sp = make_space({3, 3, n_mech}, {"cav1", "cav2", "mech"});
    const Matrix H = build_h_srp(sp, g, f, true).dense();
    const auto pol_sp = make_space({3, 3, n_mech}, {"sym", "anti", "mech"});
    const Matrix P = build_h_polaron(pol_sp, f).dense();
    const double cut = 2.5 * f.E_beta;
    double worst = 0.0;
    for (std::size_t N = 0; N <= 2; ++N) {
        std::vector<Eigen::Index> idx, pidx;
        for (std::size_t i = 0; i < sp.dim(); ++i) {
            const auto o = sp.unflatten(i);
            if (o[0] + o[1] == N) idx.push_back(Eigen::Index(i));
        }
        for (std::size_t i = 0; i < pol_sp.dim(); ++i) {
            const auto o = pol_sp.unflatten(i);
            if (o[0] + o[1] == N) pidx.push_back(Eigen::Index(i));
        }
        Matrix B(Eigen::Index(idx.size()), Eigen::Index(idx.size()));
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) B(Eigen::Index(a), Eigen::Index(b)) = H(idx[a], idx[b]);
        Eigen::SelfAdjointEigenSolver<Matrix> es(B, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd ev = es.eigenvalues();
        for (auto pi : pidx) {
            const double e = P(pi, pi).real();
            if (e > cut) continue;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < ev.size(); ++k) best = std::min(best, std::abs(ev(k) - e));
            worst = std::max(worst, best);
        }
    }
    res.check("polaron.spectral_equivalence_2photon", worst < 1e-3, worst, 1e-3, "kappa units");
}

// Closed-system transitionless ramp leaves the Bogoliubov mode in its ground state.
inline void td_exactness(ScenarioResult& res, std::size_t n) {
    const double r = r_from_dB(20.0), rb = 0.5 * r, Eb = 1.0, D = Eb * std::cosh(2.0 * r);
    const auto sp = make_space({n}, {"mech"});
    const auto pulse = td_schedule(r, 0.1, PulseShape::gaussian, D);
    const auto a = mode_operator(sp, "mech", ModeOp::annihilate);
    const Operator b = std::cosh(rb) * a + std::sinh(rb) * a.adjoint();
    const Operator bd = b.adjoint();
    TimeDependentOperator H(D * (bd * b));
    H.add([pulse](double t) { return -0.5 * std::conj(pulse.eval(t).lambda); }, b * b);
    H.add([pulse](double t) { return -0.5 * pulse.eval(t).lambda; }, bd * bd);
    IntegratorOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-12;
    const Vector psi = evolve_ket(local_squeeze(n, -rb).col(0), H, 0.0, 0.1, o);
    const double nb = beta_population(DensityMatrix::pure(sp, psi), r - rb);
    res.check("td.closed_system_residual", nb < 1e-4, nb, 1e-4, "<beta^dag beta> after the ramp, gamma = 0");
}

inline void greens_limits(ScenarioResult& res) {
    // r = 0: no anomalous response, ordinary oscillator pole
    const MechanicalResponse m0{1.3, 0.0, 0.01, 0.5};
    double worst_t = 0.0, worst_r = 0.0;
    for (double w : linspace(-3.0, 3.0, 61)) {
        const auto [gr, grt] = greens_retarded(w, m0);
        worst_t = std::max(worst_t, std::abs(grt));
        worst_r = std::max(worst_r, std::abs(gr - 1.0 / cplx_t(w - m0.Delta, m0.gamma / 2)) * std::abs(w - m0.Delta));
    }
    res.check("greens.anomalous_vanishes_at_r0", worst_t < 1e-14, worst_t, 1e-14);
    res.check("greens.r0_pole", worst_r < 1e-12, worst_r, 1e-12);

    // large r: |g^2 G^R[0] / 2| approaches Lambda = g~^2 / E_beta
    const double g = 0.1, r = r_from_dB(30.0), Eb = 1.0;
    const auto m = MechanicalResponse::from_frame(r, Eb, 1e-3 * Eb, 0.5);
    const double lam = std::pow(0.5 * g * std::exp(r), 2) / Eb;
    const double got = 0.5 * g * g * std::abs(greens_retarded(0.0, m).first);
    const double tol = 1e-3 + 2.0 * std::exp(-2.0 * r);
    res.check("greens.static_kernel_matches_Lambda", rel(got, lam) < tol, rel(got, lam), tol);

    // G^K is -i times a positive function
    double worst_k = -std::numeric_limits<double>::infinity();
    for (double w : linspace(-3.0, 3.0, 121)) worst_k = std::max(worst_k, greens_keldysh(w, m).first.imag());
    res.check("greens.keldysh_negative_imaginary", worst_k < 0.0, worst_k, 0.0);
}

inline void heating(ScenarioResult& res) {
    const double g = 0.3, r = r_from_dB(30.0), gt = 0.5 * g * std::exp(r);
    const double G1 = heating_rate(1e-4, g, 2.0 * gt, r, 0.5, 1.0);
    res.check("heating.pulsed_protocol_unit_partner", rel(G1, 0.2) < 1e-9, G1, 0.2);
    const double ratio = heating_rate(1e-4, g, 1.0, r_from_dB(40.0), 0.5, 1.0) / heating_rate(1e-4, g, 1.0, r_from_dB(20.0), 0.5, 1.0);
    res.check("heating.e4r_scaling", rel(ratio, 1e4) < 1e-9, ratio, 1e4);
}

// Steady state of E_beta beta^dag beta with the exactly transformed thermal dissipators against
// the closed-form covariances.
inline void thermometry(ScenarioResult& res, std::size_t n) {
    const double r = 0.5 * std::log(10.0), Eb = 1.0, gamma = 1e-3 * Eb, nbar = 0.5;
    const auto sp = make_space({n}, {"mech"});
    const auto beta = mode_operator(sp, "mech", ModeOp::annihilate);
    const auto rho = steady_state(
        build_liouvillian(Eb * (beta.adjoint() * beta), frame_transformed_mech_dissipators(sp, "mech", gamma, nbar, r)));
    const double nn = expectation(rho, beta.adjoint() * beta).real();
    const cplx bb = expectation(rho, beta * beta);
    const auto [nn_cf, bb_cf] = beta_covariances(MechanicalResponse::from_frame(r, Eb, gamma, nbar));
    res.check("thermometry.occupation", rel(nn, nn_cf) < 0.05, nn, nn_cf);
    res.check("thermometry.anomalous", std::abs(bb - bb_cf) / std::abs(bb_cf) < 0.10, std::abs(bb - bb_cf) / std::abs(bb_cf), 0.10);
}

// Steady state against long-time evolution for a driven Kerr oscillator.
inline void steady_vs_evolution(ScenarioResult& res) {
    const auto sp = make_space({12}, {"c"});
    const auto a = mode_operator(sp, "c", ModeOp::annihilate);
    const auto n = a.adjoint() * a;
    const Operator H = (-0.3) * n + 0.5 * (n * n - n) + 0.4 * (a + a.adjoint());
    const Liouvillian L(H, {make_dissipator(a, 1.0)});
    const auto ss = steady_state(L);
    const std::vector<double> grid{0.0, 60.0};
    const auto tr = evolve(DensityMatrix::pure(sp, vacuum_ket(sp)), L, grid);
    const auto& fin = tr.snapshots.back().second;
    const double dn = std::abs(expectation(ss, n).real() - expectation(fin, n).real());
    const double dg = std::abs(g2_zero(ss, a) - g2_zero(fin, a));
    res.check("steady_state.matches_evolution_n", dn < 1e-4, dn, 1e-4);
    res.check("steady_state.matches_evolution_g2", dg < 1e-4, dg, 1e-4);
}

// Lab-frame thermal damping of a squeezed oscillator against the beta-frame model.
inline void frame_exactness(ScenarioResult& res, std::size_t n_lab) {
    const double r = 0.5 * std::log(10.0), Eb = 1.0, gamma = 0.05, nbar = 0.5, T = 5.0;
    const double D = Eb * std::cosh(2.0 * r), lam = D * std::tanh(2.0 * r);
    const auto lab = make_space({n_lab}, {"mech"});
    const Operator Hl = parametric_term(lab, "mech", D, lam);
    const Vector psi = local_squeeze(n_lab, r).col(0);
    const std::vector<double> grid{0.0, T};
    const auto tl = evolve(DensityMatrix::pure(lab, psi), Liouvillian(Hl, thermal_dissipators(lab, "mech", gamma, nbar)),
                           grid, {{"nbeta", [&] {
                                       const auto bt = bogoliubov_operator(lab, "mech", r);
                                       return bt.adjoint() * bt;
                                   }()}});
    const auto bsp = make_space({30}, {"mech"});
    const auto beta = mode_operator(bsp, "mech", ModeOp::annihilate);
    const auto tb = evolve(DensityMatrix::pure(bsp, vacuum_ket(bsp)),
                           Liouvillian(Eb * (beta.adjoint() * beta), frame_transformed_mech_dissipators(bsp, "mech", gamma, nbar, r)),
                           grid, {{"nbeta", beta.adjoint() * beta}});
    const double a = tl.series("nbeta").back().real(), b = tb.series("nbeta").back().real();
    res.check("frame.lab_vs_beta_frame", rel(a, b) < 0.01, rel(a, b), 0.01);
}

// Gaussian test states: the Wick expression reproduces g2 exactly.
inline void wick_on_gaussian_states(ScenarioResult& res) {
    const std::size_t d = 60;
    const auto sp = make_space({d}, {"c"});
    const auto a = mode_operator(sp, "c", ModeOp::annihilate);
    double worst = 0.0;
    const Vector coh = local_displacement(d, cplx(0.8, 0.3)).col(0);
    const Vector sq = local_squeeze(d, 0.4).col(0);
    const Vector dsq = local_displacement(d, 0.5) * sq;
    for (const Matrix& m : {Matrix(coh * coh.adjoint()), thermal_matrix(d, 0.7), Matrix(sq * sq.adjoint()),
                            Matrix(dsq * dsq.adjoint())}) {
        Matrix mm = m / m.trace().real();
        const DensityMatrix rho(sp, 0.5 * (mm + mm.adjoint()));
        worst = std::max(worst, std::abs(g2_gaussian(extract_moments(rho, a)) - g2_zero(rho, a)));
    }
    res.check("wick.gaussian_states_exact", worst < 1e-9, worst, 1e-9);
}

// The counter-rotating coupling at omega_fast barely moves <n1> for a one-photon state. Both coupling
// terms conserve n1 + n2, so two levels per cavity are exact.
inline void counter_rotating_toggle(ScenarioResult& res, double omega_fast, std::size_t n_mech) {
    const auto sp = make_space({2, 2, n_mech}, {"cav1", "cav2", "mech"});
    const double r = 0.5 * std::log(10.0), Eb = 1.0;
    ModelParams p;
    p.g = 0.3;
    p.Delta = Eb * std::cosh(2.0 * r);
    p.lambda = p.Delta * std::tanh(2.0 * r);
    const Vector m = local_squeeze(n_mech, r).col(0);
    Vector psi = Vector::Zero(Eigen::Index(sp.dim()));
    for (Eigen::Index k = 0; k < m.size(); ++k) psi(Eigen::Index(sp.flatten(std::vector<std::size_t>{1, 0, std::size_t(k)}))) = m(k);
    IntegratorOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-12;
    const double T = 10.0 / Eb;
    const auto n1 = mode_operator(sp, "cav1", ModeOp::number);
    const double x0 = expectation(DensityMatrix::pure(sp, evolve_ket(psi, build_h_initial(sp, p, false), 0.0, T, o)), n1).real();
    const double x1 =
        expectation(DensityMatrix::pure(sp, evolve_ket(psi, build_h_initial(sp, p, true, omega_fast * Eb), 0.0, T, o)), n1)
            .real();
    const double rel_shift = std::abs(x1 - x0) / x0;
    res.check("rwa.counter_rotating_shift_n1", rel_shift < 0.01, rel_shift, 0.01);
}

} // namespace validation

inline ScenarioResult run_validate(const ValidateParams& p) {
    ScenarioResult res;
    res.scenario = "validate";
    std::mt19937_64 rng(p.seed);
    validation::generator_structure(res, rng);
    validation::polaron_equivalence(res, p.polaron_n_mech);
    validation::td_exactness(res, p.td_n_mech);
    validation::greens_limits(res);
    validation::heating(res);
    validation::thermometry(res, p.thermometry_n_mech);
    validation::steady_vs_evolution(res);
    validation::frame_exactness(res, p.frame_n_mech_lab);
    validation::wick_on_gaussian_states(res);
    validation::counter_rotating_toggle(res, p.omega_fast, p.rwa_n_mech);
    CsvTable t({"index", "passed", "value", "threshold"});
    nlohmann::json names = nlohmann::json::array();
    for (std::size_t i = 0; i < res.checks.size(); ++i) {
        const auto& c = res.checks[i];
        t.add_row({double(i), c.passed ? 1.0 : 0.0, c.value, c.threshold});
        names.push_back(c.name);
    }
    res.add_table("validate.csv", std::move(t));
    res.summary["check_names"] = names;
    return res;
}

} // namespace optoamp
