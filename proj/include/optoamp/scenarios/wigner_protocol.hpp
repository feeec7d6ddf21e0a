// scenarios/wigner_protocol.hpp — pulsed generation of negative Wigner functions and the
// subsequent emission of the cavity-1 state after the drive is switched off
//
// Timeline (t = 0 at the start of the on-ramp):
//   [0, tau_on]                transitionless on-ramp, simulated in the instantaneous beta frame
//   [tau_on, t_off]            hold at full amplification (static generator)
//   [t_off, t_off + tau_on]    transitionless off-ramp; the mechanics ends back in b
//   decay                      residual coupling g at detuning Delta, compared with g = 0

#pragma once

#include <numbers>

#include "optoamp/analytics.hpp"
#include "optoamp/models.hpp"
#include "optoamp/scenarios/common.hpp"

namespace optoamp {

struct WignerProtocolParams {
    double g = 0.3;
    double kappa = 1.0;
    double gamma = 1e-4;
    double nbar_m = 0.5;
    double alpha1 = 1.0;
    std::vector<double> dB{30.0, 25.0};
    double E_beta_factor = 2.0;                    // E_beta = factor * g~
    double tau_on_fraction = 1.0 / 400.0;          // tau_on / tau_int
    double off_fraction = 0.25;                    // off-ramp start / tau_int
    std::vector<double> snapshots{0.0, 0.125, 0.25}; // / tau_int
    std::string mech_initial = "thermal";          // "thermal" (bath occupancy) or "ground"
    std::vector<std::size_t> dims{10, 5, 15};
    std::size_t hold_samples = 41;
    double wigner_extent = 3.0;
    std::size_t wigner_points = 61;
    bool truncation_check = true;
    std::vector<std::size_t> truncation_extra{1, 1, 2};
    double truncation_tolerance = 2e-3; // absolute, on min W and photon numbers
    bool decay = true;
    std::vector<double> decay_dB{30.0};
    std::vector<std::size_t> decay_dims{10, 4, 13};
    double decay_t_end = 4.0;
    std::size_t decay_samples = 9;
    std::vector<double> decay_wigner_times{0.0, 0.5, 1.5};
    double decay_discard_tolerance = 1e-3;
    IntegratorOptions integrator{};
    std::size_t threads = 0;

    static WignerProtocolParams read(const Config& c) { return read(c, WignerProtocolParams{}); }

    static WignerProtocolParams read(const Config& c, WignerProtocolParams p) {
        p.g = c.get_double("model.g", p.g);
        p.kappa = c.get_double("model.kappa", p.kappa);
        p.gamma = c.get_double("model.gamma", p.gamma);
        p.nbar_m = c.get_double("model.nbar_m", p.nbar_m);
        p.alpha1 = c.get_double("model.alpha1", p.alpha1);
        p.dB = c.get_doubles("model.dB", p.dB);
        p.E_beta_factor = c.get_double("model.E_beta_factor", p.E_beta_factor);
        p.mech_initial = c.get_string("model.mech_initial", p.mech_initial);
        p.tau_on_fraction = c.get_double("pulse.tau_on_fraction", p.tau_on_fraction);
        p.off_fraction = c.get_double("pulse.off_fraction", p.off_fraction);
        p.snapshots = c.get_doubles("run.snapshots", p.snapshots);
        p.hold_samples = c.get_size("run.hold_samples", p.hold_samples);
        p.dims = read_dims(c, "truncation.dims", p.dims);
        p.truncation_check = c.get_bool("truncation.check", p.truncation_check);
        p.truncation_extra = c.get_sizes("truncation.extra", p.truncation_extra);
        p.truncation_tolerance = c.get_double("truncation.tolerance", p.truncation_tolerance);
        p.wigner_extent = c.get_double("wigner.extent", p.wigner_extent);
        p.wigner_points = c.get_size("wigner.points", p.wigner_points);
        p.decay = c.get_bool("decay.enabled", p.decay);
        p.decay_dB = c.get_doubles("decay.dB", p.decay_dB);
        p.decay_dims = read_dims(c, "decay.dims", p.decay_dims);
        p.decay_t_end = c.get_double("decay.t_end", p.decay_t_end);
        p.decay_samples = c.get_size("decay.samples", p.decay_samples);
        p.decay_wigner_times = c.get_doubles("decay.wigner_times", p.decay_wigner_times);
        p.decay_discard_tolerance = c.get_double("decay.discard_tolerance", p.decay_discard_tolerance);
        p.integrator = read_integrator(c, p.integrator);
        p.validate();
        return p;
    }

    void validate() const {
        if (!(g >= 0.0) || !(kappa >= 0.0) || !(gamma >= 0.0) || !(nbar_m >= 0.0))
            throw ConfigError("wigner protocol: negative rate or occupancy");
        for (double v : dB)
            if (!(v > 0.0)) throw ConfigError("wigner protocol: model.dB entries must be positive");
        if (!(E_beta_factor > 0.0)) throw ConfigError("wigner protocol: model.E_beta_factor must be positive");
        if (mech_initial != "thermal" && mech_initial != "ground")
            throw ConfigError("wigner protocol: model.mech_initial must be \"thermal\" or \"ground\"");
        if (!(tau_on_fraction > 0.0) || !(off_fraction >= tau_on_fraction))
            throw ConfigError("wigner protocol: need 0 < tau_on_fraction <= off_fraction");
        for (double s : snapshots)
            if (s < 0.0 || s > off_fraction || (s > 0.0 && s < tau_on_fraction))
                throw ConfigError("wigner protocol: snapshots must be 0 or lie in [tau_on_fraction, off_fraction]");
        if (hold_samples < 2) throw ConfigError("wigner protocol: run.hold_samples must be >= 2");
        if (!(wigner_extent > 0.0) || wigner_points < 2) throw ConfigError("wigner protocol: bad Wigner grid");
        if (truncation_extra.size() != 3) throw ConfigError("wigner protocol: truncation.extra needs 3 entries");
        for (std::size_t k = 0; k < 3; ++k)
            if (decay_dims[k] > dims[k]) throw ConfigError("wigner protocol: decay.dims may not exceed truncation.dims");
        if (!(decay_t_end > 0.0) || decay_samples < 2) throw ConfigError("wigner protocol: bad decay grid");
        for (double t : decay_wigner_times)
            if (t < 0.0 || t > decay_t_end) throw ConfigError("wigner protocol: decay.wigner_times outside [0, t_end]");
    }
};

struct WignerProtocolRun {
    double dB = 0.0;
    BogoliubovFrame frame;
    double tau_int = 0.0, tau_on = 0.0, t_off = 0.0;
    std::vector<std::pair<double, DensityMatrix>> snapshots; // full state at each requested time
    CsvTable populations{{"t", "r", "n1", "n2", "n_beta"}};
    DensityMatrix after_off_ramp;
    double nbar_partner = 0.0; // time-averaged cavity-2 occupation during the hold
};

namespace detail {

inline HilbertSpace protocol_space(const std::vector<std::size_t>& dims) {
    return make_space(dims, {"cav1", "cav2", "mech"});
}

inline DensityMatrix protocol_initial_state(const HilbertSpace& sp, const WignerProtocolParams& p) {
    const std::size_t n1 = sp.mode_dim(0), n2 = sp.mode_dim(1), nm = sp.mode_dim(2);
    const Vector c = local_displacement(n1, p.alpha1).col(0);
    Matrix m1 = c * c.adjoint();
    m1 /= m1.trace().real();
    Matrix m2 = Matrix::Zero(Eigen::Index(n2), Eigen::Index(n2));
    m2(0, 0) = 1.0;
    Matrix mm;
    if (p.mech_initial == "thermal") {
        mm = thermal_matrix(nm, p.nbar_m);
        mm /= mm.trace().real();
    } else {
        mm = Matrix::Zero(Eigen::Index(nm), Eigen::Index(nm));
        mm(0, 0) = 1.0;
    }
    return product_state(sp, {m1, m2, mm});
}

inline std::vector<Dissipator> protocol_dissipators(const HilbertSpace& sp, const WignerProtocolParams& p, double r,
                                                    double phase = 0.0) {
    auto d = cavity_dissipators(sp, p.kappa);
    auto m = frame_transformed_mech_dissipators(sp, "mech", p.gamma, p.nbar_m, r, phase);
    d.insert(d.end(), m.begin(), m.end());
    return d;
}

// Undo the ramp picture: rho = exp(-i theta n_mech) rho_I exp(i theta n_mech). The mechanics is the last mode.
inline DensityMatrix unrotate_mech(const DensityMatrix& rho, double theta) {
    const std::size_t nm = rho.space().mode_dim(2);
    const Eigen::Index n = rho.matrix().rows();
    Vector ph(n);
    for (Eigen::Index i = 0; i < n; ++i) ph(i) = std::exp(cplx(0.0, -theta * double(std::size_t(i) % nm)));
    Matrix m = ph.asDiagonal() * rho.matrix() * ph.conjugate().asDiagonal();
    return DensityMatrix(rho.space(), std::move(m));
}

// Evolve one ramp in the rotating picture and return the trajectory with states mapped back.
inline Trajectory evolve_ramp(const DensityMatrix& rho0, const HilbertSpace& sp, const WignerProtocolParams& p,
                              const PulseSchedule& pulse, const std::vector<double>& grid,
                              const NamedObservables& obs, const EvolveOptions& eo) {
    const BogoliubovPhase theta(pulse);
    const auto H = beta_frame_hamiltonian_rotating(sp, p.g, theta);
    TimeDependentLiouvillian L([&](double t) {
        return Liouvillian(H(t), protocol_dissipators(sp, p, pulse.eval(t).r, theta(t)));
    });
    auto tr = evolve(rho0, L, grid, obs, eo);
    for (auto& [t, rho] : tr.snapshots) rho = unrotate_mech(rho, theta(t));
    return tr;
}

} // namespace detail

// On-ramp, hold and off-ramp at one amplification; snapshots at the requested fractions of tau_int.
inline WignerProtocolRun run_wigner_protocol(const WignerProtocolParams& p, double dB,
                                             const std::vector<std::size_t>& dims) {
    WignerProtocolRun out;
    out.dB = dB;
    const double r = r_from_dB(dB);
    const double gt = 0.5 * p.g * std::exp(r);
    if (!(gt > 0.0)) throw ConfigError("wigner protocol: g must be positive");
    out.frame = frame_from_dB(dB, p.E_beta_factor * gt, p.g);
    out.tau_int = out.frame.tau_int();
    out.tau_on = p.tau_on_fraction * out.tau_int;
    out.t_off = p.off_fraction * out.tau_int;
    const double Delta = out.frame.Delta();

    const auto sp = detail::protocol_space(dims);
    const auto on = td_schedule(r, out.tau_on, PulseShape::gaussian, Delta, PulseDirection::on);
    const auto off = td_schedule(r, out.tau_on, PulseShape::gaussian, Delta, PulseDirection::off);

    const Operator n1 = mode_operator(sp, "cav1", ModeOp::number);
    const Operator n2 = mode_operator(sp, "cav2", ModeOp::number);
    const Operator nb = mode_operator(sp, "mech", ModeOp::number);
    const NamedObservables obs{{"n1", n1}, {"n2", n2}, {"n_beta", nb}};
    EvolveOptions eo;
    eo.integrator = p.integrator;
    eo.snapshot_all = true;

    std::vector<double> want;
    for (double s : p.snapshots) want.push_back(s * out.tau_int);
    auto record = [&](const Trajectory& tr, double t0, auto&& r_of) {
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            const double t = t0 + tr.times[i];
            if (out.populations.size() > 0 && t <= out.populations.rows().back()[0]) continue;
            out.populations.add_row({t, r_of(tr.times[i]), tr.records[0][i].real(), tr.records[1][i].real(),
                                     tr.records[2][i].real()});
        }
        for (const auto& [ts, rho] : tr.snapshots)
            for (double w : want) {
                if (std::abs(t0 + ts - w) > 1e-12 * (1.0 + w)) continue;
                const bool seen = std::any_of(out.snapshots.begin(), out.snapshots.end(),
                                              [&](const auto& s) { return s.first == w; });
                if (!seen) out.snapshots.emplace_back(w, rho);
            }
    };

    // on-ramp
    const auto rho0 = detail::protocol_initial_state(sp, p);
    const std::vector<double> g_on{0.0, out.tau_on};
    const auto tr_on = detail::evolve_ramp(rho0, sp, p, on, g_on, obs, eo);
    record(tr_on, 0.0, [&](double t) { return on.eval(t).r; });

    // hold
    std::vector<double> g_hold;
    for (std::size_t k = 0; k < p.hold_samples; ++k)
        g_hold.push_back(out.tau_on + (out.t_off - out.tau_on) * double(k) / double(p.hold_samples - 1));
    for (double w : want)
        if (w > out.tau_on && w < out.t_off) g_hold.push_back(w);
    std::sort(g_hold.begin(), g_hold.end());
    g_hold.erase(std::unique(g_hold.begin(), g_hold.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }),
                 g_hold.end());
    const Liouvillian L_hold(beta_frame_hamiltonian(sp, p.g, on)(out.tau_on), detail::protocol_dissipators(sp, p, r));
    std::vector<double> g_hold0;
    for (double t : g_hold) g_hold0.push_back(t - out.tau_on);
    const auto tr_hold = evolve(tr_on.final_state(), L_hold, g_hold0, obs, eo);
    record(tr_hold, out.tau_on, [&](double) { return r; });
    double acc = 0.0;
    const auto& n2s = tr_hold.series("n2");
    for (std::size_t i = 1; i < g_hold0.size(); ++i)
        acc += 0.5 * (n2s[i].real() + n2s[i - 1].real()) * (g_hold0[i] - g_hold0[i - 1]);
    out.nbar_partner = acc / (g_hold0.back() - g_hold0.front());

    // off-ramp
    const auto tr_off = detail::evolve_ramp(tr_hold.final_state(), sp, p, off, g_on, obs, eo);
    record(tr_off, out.t_off, [&](double t) { return off.eval(t).r; });
    out.after_off_ramp = tr_off.final_state();

    if (out.snapshots.size() != p.snapshots.size())
        throw InvariantError("wigner protocol: snapshot times were not all reached");
    return out;
}

struct DecayRun {
    CsvTable fidelity{{"t", "fidelity", "n1", "n1_reference", "n2", "n_mech"}};
    std::vector<std::pair<double, DensityMatrix>> cav1, cav1_reference;
    double discarded = 0.0;
    double min_fidelity = 1.0;
};

// After the off-ramp the Hamiltonian is Delta b^dag b + g(a2^dag a1 b + h.c.). In the frame rotating
// with Delta(n_b + n_2), which is conserved and leaves the cavity-1 state alone, the tunnelling is
// detuned by Delta >> g and acts through its dispersive shift. The g = 0 reference is plain decay.
inline DecayRun run_decay(const WignerProtocolParams& p, const WignerProtocolRun& pr) {
    DecayRun out;
    auto [rho, discarded] = restrict_state(pr.after_off_ramp, p.decay_dims);
    out.discarded = discarded;
    if (discarded > p.decay_discard_tolerance)
        throw TruncationError("decay: restricting to decay.dims discards population " + std::to_string(discarded));
    const auto& sp = rho.space();
    const Liouvillian L(dispersive_tunneling_hamiltonian(sp, p.g, pr.frame.Delta()),
                        detail::protocol_dissipators(sp, p, 0.0));

    const auto c1 = partial_trace(rho, std::vector<std::string>{"cav1"});
    const auto& rsp = c1.space();
    const Liouvillian L_ref(Operator::zero(rsp), {make_dissipator(mode_operator(rsp, "cav1", ModeOp::annihilate), p.kappa)});

    std::vector<double> grid;
    for (std::size_t k = 0; k < p.decay_samples; ++k)
        grid.push_back(p.decay_t_end * double(k) / double(p.decay_samples - 1));
    for (double t : p.decay_wigner_times) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    EvolveOptions eo;
    eo.integrator = p.integrator;
    eo.snapshot_all = true;
    const NamedObservables obs{{"n1", mode_operator(sp, "cav1", ModeOp::number)},
                               {"n2", mode_operator(sp, "cav2", ModeOp::number)},
                               {"n_mech", mode_operator(sp, "mech", ModeOp::number)}};
    const auto tr = evolve(rho, L, grid, obs, eo);
    const auto tr_ref = evolve(c1, L_ref, grid, {{"n1", mode_operator(rsp, "cav1", ModeOp::number)}}, eo);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto r1 = partial_trace(tr.snapshots[i].second, std::vector<std::string>{"cav1"});
        const auto& ref = tr_ref.snapshots[i].second;
        const double F = fidelity(r1, ref);
        out.min_fidelity = std::min(out.min_fidelity, F);
        out.fidelity.add_row({grid[i], F, tr.records[0][i].real(), tr_ref.records[0][i].real(), tr.records[1][i].real(),
                              tr.records[2][i].real()});
        for (double w : p.decay_wigner_times)
            if (grid[i] == w) {
                out.cav1.emplace_back(w, r1);
                out.cav1_reference.emplace_back(w, ref);
            }
    }
    return out;
}

namespace detail {

inline std::string db_tag(double dB) { return fmt_num(dB) + "dB"; }

inline double min_wigner(const DensityMatrix& rho, const std::string& mode, const std::vector<double>& xs,
                         std::size_t threads, WignerGrid* keep = nullptr) {
    auto w = wigner(partial_trace(rho, std::vector<std::string>{mode}), xs, xs, threads);
    const double m = w.min();
    if (keep) *keep = std::move(w);
    return m;
}

} // namespace detail

// Runs the protocol for every amplification in p.dB; `emit_protocol` controls the Wigner snapshots
// of the pulsed stage, the decay stage runs for the amplifications listed in p.decay_dB.
inline ScenarioResult run_wigner_scenario(const WignerProtocolParams& p, const std::string& id, bool emit_protocol) {
    ScenarioResult res;
    res.scenario = id;
    const auto xs = linspace(-p.wigner_extent, p.wigner_extent, p.wigner_points);
    nlohmann::json runs = nlohmann::json::array();
    CsvTable minw({"dB", "t", "t_over_tau_int", "minW_cav1", "minW_cav2", "n1", "n2"});

    for (double dB : p.dB) {
        const bool want_decay = p.decay && std::find(p.decay_dB.begin(), p.decay_dB.end(), dB) != p.decay_dB.end();
        if (!emit_protocol && !want_decay) continue;
        const auto run = run_wigner_protocol(p, dB, p.dims);
        const std::string tag = detail::db_tag(dB);
        const auto& sp = run.after_off_ramp.space();
        nlohmann::json rj = {{"dB", dB},
                             {"r", run.frame.r},
                             {"g_tilde", run.frame.g_tilde},
                             {"E_beta", run.frame.E_beta},
                             {"Lambda", run.frame.Lambda},
                             {"Delta", run.frame.Delta()},
                             {"tau_int", run.tau_int},
                             {"tau_on", run.tau_on},
                             {"t_off", run.t_off},
                             {"nbar_partner_hold", run.nbar_partner}};
        // heating of cavity 1 by mechanical noise with the simulated partner occupation
        rj["heating_rate"] = heating_rate(p.gamma, p.g, run.frame.E_beta, run.frame.r, p.nbar_m, run.nbar_partner);
        rj["n_beta_after_off_ramp"] = expectation(run.after_off_ramp, mode_operator(sp, "mech", ModeOp::number)).real();
        check_state(res, tag + ".after_off_ramp", run.after_off_ramp);

        if (emit_protocol) {
            res.add_table("fig4_populations_" + tag + ".csv", run.populations);
            nlohmann::json snaps = nlohmann::json::array();
            for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
                const auto& [t, rho] = run.snapshots[k];
                WignerGrid w1, w2;
                const double m1 = detail::min_wigner(rho, "cav1", xs, p.threads, &w1);
                const double m2 = detail::min_wigner(rho, "cav2", xs, p.threads, &w2);
                const double nn1 = expectation(rho, mode_operator(rho.space(), "cav1", ModeOp::number)).real();
                const double nn2 = expectation(rho, mode_operator(rho.space(), "cav2", ModeOp::number)).real();
                res.add_table("fig4_wigner_" + tag + "_cav1_t" + std::to_string(k) + ".csv", wigner_table(w1));
                res.add_table("fig4_wigner_" + tag + "_cav2_t" + std::to_string(k) + ".csv", wigner_table(w2));
                minw.add_row({dB, t, t / run.tau_int, m1, m2, nn1, nn2});
                snaps.push_back({{"t", t}, {"t_over_tau_int", t / run.tau_int}, {"minW_cav1", m1}, {"minW_cav2", m2},
                                 {"n1", nn1}, {"n2", nn2}});
            }
            rj["snapshots"] = snaps;

            if (p.truncation_check) {
                const auto big = run_wigner_protocol(p, dB, enlarge(p.dims, p.truncation_extra));
                const auto& [t_a, rho_a] = run.snapshots.back();
                const auto& rho_b = big.snapshots.back().second;
                const std::string at = "[" + tag + ",t=" + fmt_num(t_a / run.tau_int) + "tau_int]";
                res.truncation.push_back({"minW_cav1" + at, detail::min_wigner(rho_a, "cav1", xs, p.threads),
                                          detail::min_wigner(rho_b, "cav1", xs, p.threads), p.truncation_tolerance});
                res.truncation.push_back(
                    {"n1" + at, expectation(rho_a, mode_operator(rho_a.space(), "cav1", ModeOp::number)).real(),
                     expectation(rho_b, mode_operator(rho_b.space(), "cav1", ModeOp::number)).real(),
                     p.truncation_tolerance});
            }
        }

        if (want_decay) {
            const auto dec = run_decay(p, run);
            res.add_table("figS2_fidelity_" + tag + ".csv", dec.fidelity);
            for (std::size_t k = 0; k < dec.cav1.size(); ++k) {
                const auto w = wigner(dec.cav1[k].second, xs, xs, p.threads);
                const auto wr = wigner(dec.cav1_reference[k].second, xs, xs, p.threads);
                res.add_table("figS2_wigner_" + tag + "_g_t" + std::to_string(k) + ".csv", wigner_table(w));
                res.add_table("figS2_wigner_" + tag + "_ref_t" + std::to_string(k) + ".csv", wigner_table(wr));
            }
            rj["decay"] = {{"min_fidelity", dec.min_fidelity}, {"discarded_population", dec.discarded}};
        }
        runs.push_back(rj);
    }
    if (emit_protocol) res.add_table("fig4_minW.csv", std::move(minw));
    res.summary["runs"] = runs;
    return res;
}

} // namespace optoamp
