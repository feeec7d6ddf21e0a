// models.hpp — Hamiltonian builders, Bogoliubov parameter map and frames

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "optoamp/dynamics.hpp"
#include "optoamp/fock.hpp"
#include "optoamp/pulses.hpp"

namespace optoamp {

// All rates and frequencies in units of the cavity damping kappa.
struct ModelParams {
    double g = 0.1;
    double kappa = 1.0;
    double gamma = 0.0;      // mechanical damping
    double nbar_m = 0.0;     // mechanical bath occupancy
    double Delta = 1.0;      // omega_M - omega_p
    cplx lambda = 0.0;       // parametric strength lambda0 + i lambda1
    double delta = 0.0;      // omega_p - omega_21
    double epsilon = 0.0;    // probe amplitude
    double omega_d = 0.0;    // probe detuning
    double gamma_beta = 0.0; // dissipative-squeezing rate
    std::vector<std::size_t> dims{4, 4, 8};

    void validate() const {
        if (!(kappa >= 0.0) || !(gamma >= 0.0) || !(nbar_m >= 0.0) || !(gamma_beta >= 0.0))
            throw ConfigError("ModelParams: rates and occupancies must be non-negative");
        if (Delta > 0.0 && !(std::abs(lambda.real()) < Delta))
            throw ConfigError("ModelParams: |lambda0| must stay below Delta (parametric instability)");
        for (auto d : dims)
            if (d < 2) throw ConfigError("ModelParams: every truncation must be >= 2");
    }
};

inline double r_from_dB(double dB) { return dB * std::log(10.0) / 20.0; }
inline double dB_from_r(double r) { return 20.0 * r / std::log(10.0); }

struct BogoliubovFrame {
    double r = 0.0;
    double E_beta = 0.0;
    double g_tilde = 0.0;
    double Lambda = 0.0;

    double tau_int() const { return 2.0 * std::numbers::pi / Lambda; }
    double amplification_dB() const { return dB_from_r(r); }
    double Delta() const { return E_beta * std::cosh(2.0 * r); }
    double lambda0() const { return Delta() * std::tanh(2.0 * r); }

    BogoliubovFrame with_coupling(double g) const {
        BogoliubovFrame f = *this;
        f.g_tilde = 0.5 * g * std::exp(r);
        f.Lambda = f.g_tilde * f.g_tilde / f.E_beta;
        return f;
    }
};

// r = atanh(lambda0/Delta)/2, E_beta = Delta/cosh 2r
inline BogoliubovFrame bogoliubov_params(double lambda0, double Delta) {
    if (!(Delta > 0.0)) throw ConfigError("bogoliubov_params: Delta must be positive");
    if (!(lambda0 >= 0.0)) throw ConfigError("bogoliubov_params: lambda0 must be non-negative");
    if (!(lambda0 < Delta)) throw ConfigError("bogoliubov_params: lambda0 >= Delta is parametrically unstable");
    BogoliubovFrame f;
    f.r = 0.5 * std::atanh(lambda0 / Delta);
    f.E_beta = Delta / std::cosh(2.0 * f.r);
    return f;
}

// Frame fixed by amplification and Bogoliubov energy (the form used by the figure protocols).
inline BogoliubovFrame frame_from_dB(double dB, double E_beta, double g) {
    if (!(E_beta > 0.0)) throw ConfigError("frame_from_dB: E_beta must be positive");
    if (!(dB >= 0.0)) throw ConfigError("frame_from_dB: amplification must be >= 0 dB");
    BogoliubovFrame f;
    f.r = r_from_dB(dB);
    f.E_beta = E_beta;
    return f.with_coupling(g);
}

namespace detail {

struct ThreeModes {
    Operator a1, a2, b;
};

inline ThreeModes three_modes(const HilbertSpace& space, std::string_view c1 = "cav1", std::string_view c2 = "cav2",
                              std::string_view m = "mech") {
    for (auto l : {c1, c2, m})
        if (!space.has_mode(l)) throw ConfigError("model requires a mode labelled '" + std::string(l) + "'");
    return {mode_operator(space, c1, ModeOp::annihilate), mode_operator(space, c2, ModeOp::annihilate),
            mode_operator(space, m, ModeOp::annihilate)};
}

} // namespace detail

// Lab-frame parametric oscillator Delta b^dag b - (lambda* b^2 + lambda b^dag^2)/2.
// For real lambda this is the familiar -(lambda/2)(b^2 + b^dag^2).
inline Operator parametric_term(const HilbertSpace& space, std::string_view mode, double Delta, cplx lambda) {
    const auto b = mode_operator(space, mode, ModeOp::annihilate);
    const auto bd = b.adjoint();
    return Delta * (bd * b) - 0.5 * (std::conj(lambda) * (b * b) + lambda * (bd * bd));
}

// Parametric oscillator driven along a schedule, as a time-dependent operator.
inline TimeDependentOperator parametric_hamiltonian(const HilbertSpace& space, std::string_view mode,
                                                    const PulseSchedule& pulse) {
    const auto b = mode_operator(space, mode, ModeOp::annihilate);
    const auto bd = b.adjoint();
    TimeDependentOperator H(pulse.Delta() * (bd * b));
    H.add([pulse](double t) { return -0.5 * std::conj(pulse.eval(t).lambda); }, b * b);
    H.add([pulse](double t) { return -0.5 * pulse.eval(t).lambda; }, bd * bd);
    return H;
}

// Delta b^dag b - (lambda* b^2 + lambda b^dag^2)/2 + g[a2^dag a1 b e^{-i delta t} + h.c.]
// With the counter-rotating flag: + g[a2^dag a1 b^dag e^{-i omega_fast t} + h.c.].
inline TimeDependentOperator build_h_initial(const HilbertSpace& space, const ModelParams& p,
                                             bool include_counter_rotating = false, double omega_fast = 0.0) {
    const auto [a1, a2, b] = detail::three_modes(space);
    TimeDependentOperator H(parametric_term(space, "mech", p.Delta, p.lambda));
    const Operator hop = a2.adjoint() * a1;
    const Operator A = p.g * (hop * b);
    const Operator Ad = A.adjoint();
    const double delta = p.delta;
    H.add([delta](double t) { return std::exp(cplx(0.0, -delta * t)); }, A);
    H.add([delta](double t) { return std::exp(cplx(0.0, delta * t)); }, Ad);
    if (include_counter_rotating) {
        const Operator B = p.g * (hop * b.adjoint());
        const Operator Bd = B.adjoint();
        H.add([omega_fast](double t) { return std::exp(cplx(0.0, -omega_fast * t)); }, B);
        H.add([omega_fast](double t) { return std::exp(cplx(0.0, omega_fast * t)); }, Bd);
    }
    return H;
}

// Photon-hopping coupling a2^dag a1 (c beta + s beta^dag) + h.c. in the frame of squeezing r.
inline Operator transformed_coupling(const HilbertSpace& space, double r) {
    const auto [a1, a2, beta] = detail::three_modes(space);
    const Operator hop = a2.adjoint() * a1;
    const Operator X = std::cosh(r) * beta + std::sinh(r) * beta.adjoint();
    const Operator C = hop * X;
    return C + C.adjoint();
}

// E_beta beta^dag beta + g[a2^dag a1 (cosh r beta + sinh r beta^dag) + h.c.]; the mechanical mode
// carries beta. With drop_prime the coupling is replaced by g~(a2^dag a1 + h.c.)(beta + beta^dag).
inline Operator build_h_srp(const HilbertSpace& space, double g, const BogoliubovFrame& f, bool drop_prime = false) {
    const auto [a1, a2, beta] = detail::three_modes(space);
    Operator H = f.E_beta * (beta.adjoint() * beta);
    if (drop_prime) {
        const double gt = 0.5 * g * std::exp(f.r);
        const Operator hop = a2.adjoint() * a1;
        H += gt * ((hop + hop.adjoint()) * (beta + beta.adjoint()));
    } else {
        H += g * transformed_coupling(space, f.r);
    }
    return H;
}

// (E_beta - delta) beta^dag beta + g~(a2^dag a1 beta + a1^dag a2 beta^dag)
inline Operator build_h_pat(const HilbertSpace& space, const BogoliubovFrame& f, double delta) {
    const auto [a1, a2, beta] = detail::three_modes(space);
    const Operator T = a2.adjoint() * a1 * beta;
    return (f.E_beta - delta) * (beta.adjoint() * beta) + f.g_tilde * (T + T.adjoint());
}

// Diagonal polaron Hamiltonian E_beta n_beta - Lambda (n_s - n_a)^2 on modes (sym, anti, mech).
inline Operator build_h_polaron(const HilbertSpace& space, const BogoliubovFrame& f, std::string_view sym = "sym",
                                std::string_view anti = "anti", std::string_view mech = "mech") {
    const auto is = space.mode_index(sym), ia = space.mode_index(anti), im = space.mode_index(mech);
    const auto n = static_cast<Eigen::Index>(space.dim());
    std::vector<Triplet> t;
    t.reserve(space.dim());
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto occ = space.unflatten(static_cast<std::size_t>(k));
        const double d = double(occ[is]) - double(occ[ia]);
        const double e = f.E_beta * double(occ[im]) - f.Lambda * d * d;
        if (e != 0.0) t.emplace_back(k, k, e);
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return Operator(space, std::move(m));
}

// Frame rotating at the probe frequency: H - omega_d (n1 + n2) + eps (a1 + a2 + h.c.).
// The probe convention is eps a_j e^{i omega_dj t} + h.c., so only equal frequencies give a static frame.
inline Operator to_rotating_frame(const Operator& H, double epsilon, double omega_d1, double omega_d2,
                                  std::string_view c1 = "cav1", std::string_view c2 = "cav2") {
    if (omega_d1 != omega_d2)
        throw ConfigError("to_rotating_frame: unequal probe frequencies have no static rotating frame");
    const auto& space = H.space();
    const auto a1 = mode_operator(space, c1, ModeOp::annihilate);
    const auto a2 = mode_operator(space, c2, ModeOp::annihilate);
    const Operator N = a1.adjoint() * a1 + a2.adjoint() * a2;
    const double defect = commutator(N, H).matrix().cwiseAbs().sum();
    if (defect > 1e-9 * (1.0 + H.matrix().cwiseAbs().sum()))
        throw ConfigError("to_rotating_frame: Hamiltonian does not conserve total photon number");
    Operator out = H - omega_d1 * N;
    if (epsilon != 0.0) out += epsilon * (a1 + a2 + a1.adjoint() + a2.adjoint());
    return out;
}

inline Operator to_rotating_frame(const Operator& H, double epsilon, double omega_d) {
    return to_rotating_frame(H, epsilon, omega_d, omega_d);
}

inline std::vector<Dissipator> cavity_dissipators(const HilbertSpace& space, double kappa,
                                                  std::string_view c1 = "cav1", std::string_view c2 = "cav2") {
    std::vector<Dissipator> out;
    if (kappa <= 0.0) return out;
    out.push_back(make_dissipator(mode_operator(space, c1, ModeOp::annihilate), kappa));
    out.push_back(make_dissipator(mode_operator(space, c2, ModeOp::annihilate), kappa));
    return out;
}

// Two-cavity system in the instantaneous Bogoliubov frame while the drive follows `pulse`
// (Delta held fixed). The mechanics mode carries beta(r(t)):
//   E_beta(t) beta^dag beta - (i/2)(lambda1 + r_dot)(beta^dag^2 - beta^2)
//   + g[a2^dag a1 (cosh r beta + sinh r beta^dag) + h.c.]
// Under exact transitionless driving the second term vanishes identically.
inline TimeDependentOperator beta_frame_hamiltonian(const HilbertSpace& space, double g, const PulseSchedule& pulse) {
    const auto [a1, a2, beta] = detail::three_modes(space);
    const Operator hop = a2.adjoint() * a1;
    const Operator nb = beta.adjoint() * beta;
    const Operator sq = beta.adjoint() * beta.adjoint() - beta * beta;
    const Operator Cb = g * (hop * beta + hop.adjoint() * beta.adjoint());
    const Operator Cbd = g * (hop * beta.adjoint() + hop.adjoint() * beta);
    const double Delta = pulse.Delta();
    TimeDependentOperator H(Operator::zero(space));
    H.add([pulse, Delta](double t) { return cplx(Delta / std::cosh(2.0 * pulse.eval(t).r), 0.0); }, nb);
    H.add([pulse](double t) {
        const auto s = pulse.eval(t);
        return cplx(0.0, -0.5) * (s.lambda.imag() + s.r_dot);
    }, sq);
    H.add([pulse](double t) { return cplx(std::cosh(pulse.eval(t).r), 0.0); }, Cb);
    H.add([pulse](double t) { return cplx(std::sinh(pulse.eval(t).r), 0.0); }, Cbd);
    return H;
}

// The same generator in the picture rotating with theta(t) beta^dag beta, theta' = Delta / cosh 2r.
// The fast diagonal term is gone and its phase sits on the coupling terms instead, which keeps
// the integrator step large while r is small and Delta / cosh 2r is large.
inline TimeDependentOperator beta_frame_hamiltonian_rotating(const HilbertSpace& space, double g,
                                                             const BogoliubovPhase& theta) {
    const auto [a1, a2, beta] = detail::three_modes(space);
    const Operator hop = a2.adjoint() * a1;
    const Operator bb = beta.adjoint() * beta.adjoint();
    const Operator bd = beta.adjoint();
    const PulseSchedule pulse = theta.pulse();
    TimeDependentOperator H(Operator::zero(space));
    H.add([pulse, theta](double t) {
        const auto s = pulse.eval(t);
        return cplx(0.0, -0.5) * (s.lambda.imag() + s.r_dot) * std::exp(cplx(0.0, 2.0 * theta(t)));
    }, bb);
    H.add([pulse, theta](double t) {
        const auto s = pulse.eval(t);
        return cplx(0.0, 0.5) * (s.lambda.imag() + s.r_dot) * std::exp(cplx(0.0, -2.0 * theta(t)));
    }, beta * beta);
    H.add([pulse, theta, g](double t) {
        const double r = pulse.eval(t).r;
        return g * std::cosh(r) * std::exp(cplx(0.0, -theta(t)));
    }, hop * beta);
    H.add([pulse, theta, g](double t) {
        const double r = pulse.eval(t).r;
        return g * std::cosh(r) * std::exp(cplx(0.0, theta(t)));
    }, hop.adjoint() * bd);
    H.add([pulse, theta, g](double t) {
        const double r = pulse.eval(t).r;
        return g * std::sinh(r) * std::exp(cplx(0.0, theta(t)));
    }, hop * bd);
    H.add([pulse, theta, g](double t) {
        const double r = pulse.eval(t).r;
        return g * std::sinh(r) * std::exp(cplx(0.0, -theta(t)));
    }, hop.adjoint() * beta);
    return H;
}

// Far-detuned phonon-assisted tunnelling: g(a2^dag a1 b + h.c.) with the transfer T = a2^dag a1 b costing
// energy Delta. Second-order elimination gives the diagonal shift (g^2 / Delta)[T^dag, T]; what is
// dropped is an oscillating admixture of relative size g / Delta.
inline Operator dispersive_tunneling_hamiltonian(const HilbertSpace& space, double g, double Delta) {
    if (!(std::abs(Delta) > 0.0)) throw ConfigError("dispersive_tunneling_hamiltonian: Delta must be nonzero");
    const auto [a1, a2, b] = detail::three_modes(space);
    const Operator T = a2.adjoint() * a1 * b;
    return (g * g / Delta) * (T.adjoint() * T - T * T.adjoint());
}

// ---------------------- Squeezed-cavity counterexample -----------------------

struct SqueezedCavityParams {
    double g = 0.1;
    double omega_M = 50.0;
    double r_c = 0.0;
    double epsilon = 0.001;
    double gamma = 1e-4;
    double kappa = 1.0;
    std::optional<double> omega_d; // defaults to -K_c (one-photon resonance of the alpha Kerr)

    double kerr() const {
        const double c2 = std::cosh(2.0 * r_c);
        return g * g * c2 * c2 / omega_M;
    }
};

struct SqueezedCavityModel {
    Operator H;
    std::vector<Dissipator> dissipators;
    Operator a_real; // cosh r_c alpha + sinh r_c alpha^dag
    Operator alpha;
    double kerr = 0.0;
    double delta_alpha = 0.0;
};

// Modes (alpha, mech):
//   H = delta_alpha n_alpha + omega_M b^dag b + g cosh 2r_c n_alpha (b + b^dag) + eps cosh r_c (alpha + alpha^dag)
// with delta_alpha = -omega_d, zero-temperature kappa D[alpha] and gamma D[b].
inline SqueezedCavityModel build_squeezed_cavity_model(const HilbertSpace& space, const SqueezedCavityParams& p,
                                                       std::string_view cav = "alpha", std::string_view mech = "mech") {
    if (!(p.omega_M > 0.0)) throw ConfigError("squeezed cavity: omega_M must be positive");
    const auto al = mode_operator(space, cav, ModeOp::annihilate);
    const auto b = mode_operator(space, mech, ModeOp::annihilate);
    const Operator n = al.adjoint() * al;
    const double c2 = std::cosh(2.0 * p.r_c);
    SqueezedCavityModel m{Operator::zero(space), {}, Operator::zero(space), al, p.kerr(), 0.0};
    m.delta_alpha = -p.omega_d.value_or(-m.kerr);
    m.H = m.delta_alpha * n + p.omega_M * (b.adjoint() * b) + (p.g * c2) * (n * (b + b.adjoint())) +
          (p.epsilon * std::cosh(p.r_c)) * (al + al.adjoint());
    if (p.kappa > 0.0) m.dissipators.push_back(make_dissipator(al, p.kappa));
    if (p.gamma > 0.0) m.dissipators.push_back(make_dissipator(b, p.gamma));
    m.a_real = std::cosh(p.r_c) * al + std::sinh(p.r_c) * al.adjoint();
    return m;
}

} // namespace optoamp
