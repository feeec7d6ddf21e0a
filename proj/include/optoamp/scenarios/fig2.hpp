// scenarios/fig2.hpp — squeezed-state preparation: transitionless ramp versus sudden switch-on

#pragma once

#include "optoamp/models.hpp"
#include "optoamp/scenarios/common.hpp"

namespace optoamp {

struct RampParams {
    double dB = 20.0;
    double E_beta = 1.0;
    double gamma_rel = 1e-4; // gamma in units of E_beta
    double nbar_m = 0.0;
    double tau_on = 0.1;     // in units of 1/E_beta
    double t_end = 0.5;      // in units of 1/E_beta
    std::size_t samples = 101;
    std::size_t n_mech = 120;
    bool truncation_check = true;
    std::size_t truncation_extra = 20;
    double truncation_tolerance = 1e-3;
    IntegratorOptions integrator{};

    static RampParams read(const Config& c) {
        RampParams p;
        p.dB = c.get_double("model.dB", p.dB);
        p.E_beta = c.get_double("model.E_beta", p.E_beta);
        p.gamma_rel = c.get_double("model.gamma_rel", p.gamma_rel);
        p.nbar_m = c.get_double("model.nbar_m", p.nbar_m);
        p.tau_on = c.get_double("pulse.tau_on", p.tau_on);
        p.t_end = c.get_double("run.t_end", p.t_end);
        p.samples = c.get_size("run.samples", p.samples);
        p.n_mech = c.get_size("truncation.n_mech", p.n_mech);
        p.truncation_check = c.get_bool("truncation.check", p.truncation_check);
        p.truncation_extra = c.get_size("truncation.extra", p.truncation_extra);
        p.truncation_tolerance = c.get_double("truncation.tolerance", p.truncation_tolerance);
        p.integrator = read_integrator(c, p.integrator);
        p.validate();
        return p;
    }

    void validate() const {
        if (!(dB > 0.0)) throw ConfigError("ramp: model.dB must be positive");
        if (!(E_beta > 0.0) || gamma_rel < 0.0 || nbar_m < 0.0) throw ConfigError("ramp: bad model parameters");
        if (!(tau_on > 0.0) || !(t_end >= tau_on)) throw ConfigError("ramp: need 0 < tau_on <= t_end");
        if (samples < 2) throw ConfigError("ramp: run.samples must be >= 2");
        if (n_mech < 8) throw ConfigError("ramp: truncation.n_mech must be >= 8");
    }
};

namespace detail {

struct RampRun {
    std::vector<double> times, r, lambda0, lambda1, nbeta;
    DensityMatrix final_state;
};

// The mechanical mode is stored in the Fock basis of a mode squeezed by r_b = r_target/2,
// a = cosh(r_b) b - sinh(r_b) b^dag. Both the initial vacuum (squeezing -r_b) and the target
// state (squeezing r_target - r_b) are then equally compact, which keeps the truncation
// an order of magnitude below what the bare Fock basis needs.
inline RampRun run_ramp(const RampParams& p, PulseShape shape, std::size_t n_mech) {
    const double r = r_from_dB(p.dB);
    const double rb = 0.5 * r;
    const double Delta = p.E_beta * std::cosh(2.0 * r);
    const double gamma = p.gamma_rel * p.E_beta;
    const auto space = make_space({n_mech}, {"mech"});
    const auto pulse = td_schedule(r, p.tau_on / p.E_beta, shape, Delta);

    const auto a = mode_operator(space, "mech", ModeOp::annihilate);
    const Operator b = std::cosh(rb) * a + std::sinh(rb) * a.adjoint();
    const Operator bd = b.adjoint();
    TimeDependentOperator H(Delta * (bd * b));
    H.add([pulse](double t) { return -0.5 * std::conj(pulse.eval(t).lambda); }, b * b);
    H.add([pulse](double t) { return -0.5 * pulse.eval(t).lambda; }, bd * bd);
    const auto diss = frame_transformed_mech_dissipators(space, "mech", gamma, p.nbar_m, rb);

    const Vector psi0 = local_squeeze(n_mech, -rb).col(0);
    const auto rho0 = DensityMatrix::pure(space, psi0);
    TimeDependentLiouvillian L([&](double t) { return Liouvillian(H(t), diss); });

    RampRun out;
    const double t_end = p.t_end / p.E_beta;
    for (std::size_t k = 0; k < p.samples; ++k) out.times.push_back(t_end * double(k) / double(p.samples - 1));
    EvolveOptions eo;
    eo.integrator = p.integrator;
    eo.snapshot_all = true;
    const auto tr = evolve(rho0, L, out.times, {}, eo);
    for (const auto& [t, rho] : tr.snapshots) {
        const auto s = pulse.eval(t);
        out.r.push_back(s.r);
        out.lambda0.push_back(s.lambda.real());
        out.lambda1.push_back(s.lambda.imag());
        out.nbeta.push_back(beta_population(rho, s.r - rb));
    }
    out.final_state = tr.final_state();
    return out;
}

} // namespace detail

// Population of the instantaneous Bogoliubov mode during a transitionless Gaussian ramp and
// during a sudden switch-on to the same amplification.
inline ScenarioResult run_fig2(const RampParams& p) {
    ScenarioResult res;
    res.scenario = "fig2_td";
    const auto td = detail::run_ramp(p, PulseShape::gaussian, p.n_mech);
    const auto sd = detail::run_ramp(p, PulseShape::sudden, p.n_mech);

    CsvTable t({"t", "r", "lambda0", "lambda1", "nbeta_td", "nbeta_sudden"});
    for (std::size_t k = 0; k < td.times.size(); ++k)
        t.add_row({td.times[k], td.r[k], td.lambda0[k], td.lambda1[k], td.nbeta[k], sd.nbeta[k]});
    res.add_table("fig2_populations.csv", std::move(t));
    check_state(res, "td_final", td.final_state);
    check_state(res, "sudden_final", sd.final_state);

    const double r = r_from_dB(p.dB);
    const double s2 = std::sinh(r) * std::sinh(r);
    double lo = sd.nbeta.front(), hi = lo, mean = 0.0;
    for (double v : sd.nbeta) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v / double(sd.nbeta.size());
    }
    res.summary = {{"r", r},
                   {"sinh2_r", s2},
                   {"Delta", p.E_beta * std::cosh(2.0 * r)},
                   {"nbeta_td_final", td.nbeta.back()},
                   {"nbeta_sudden_mean", mean},
                   {"nbeta_sudden_min", lo},
                   {"nbeta_sudden_max", hi}};
    for (std::size_t k = 0; k < td.nbeta.size(); ++k) {
        if (!std::isfinite(td.nbeta[k]) || td.nbeta[k] < -1e-9 || !std::isfinite(sd.nbeta[k]))
            throw InvariantError("fig2: non-physical Bogoliubov population at sample " + std::to_string(k));
    }

    if (p.truncation_check) {
        const auto n2 = p.n_mech + p.truncation_extra;
        const auto td2 = detail::run_ramp(p, PulseShape::gaussian, n2);
        const auto sd2 = detail::run_ramp(p, PulseShape::sudden, n2);
        res.truncation.push_back({"nbeta_td_final", td.nbeta.back(), td2.nbeta.back(), p.truncation_tolerance});
        res.truncation.push_back(
            {"nbeta_sudden_final", sd.nbeta.back(), sd2.nbeta.back(), p.truncation_tolerance * std::max(1.0, s2)});
    }
    return res;
}

} // namespace optoamp
