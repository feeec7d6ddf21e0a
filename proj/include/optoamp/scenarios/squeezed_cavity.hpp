// scenarios/squeezed_cavity.hpp — parametrically driven cavity: alpha-mode blockade without
// real-photon antibunching

#pragma once

#include "optoamp/models.hpp"
#include "optoamp/parallel.hpp"
#include "optoamp/scenarios/common.hpp"

namespace optoamp {

struct SqueezedCavitySweepParams {
    std::vector<double> g{0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8, 1.0, 1.3};
    double dB = 15.0;
    double omega_M = 50.0;
    double epsilon = 0.001;
    double gamma = 1e-4;
    double kappa = 1.0;
    std::vector<std::size_t> dims{6, 8}; // alpha, mech
    bool truncation_check = true;
    std::vector<std::size_t> truncation_extra{1, 2};
    double truncation_tolerance = 1e-3; // relative, on both g2 values
    std::size_t threads = 0;

    static SqueezedCavitySweepParams read(const Config& c) {
        SqueezedCavitySweepParams p;
        p.g = c.get_doubles("sweep.g", p.g);
        p.dB = c.get_double("model.dB", p.dB);
        p.omega_M = c.get_double("model.omega_M", p.omega_M);
        p.epsilon = c.get_double("model.epsilon", p.epsilon);
        p.gamma = c.get_double("model.gamma", p.gamma);
        p.kappa = c.get_double("model.kappa", p.kappa);
        p.dims = read_dims(c, "truncation.dims", p.dims);
        p.truncation_check = c.get_bool("truncation.check", p.truncation_check);
        p.truncation_extra = c.get_sizes("truncation.extra", p.truncation_extra);
        p.truncation_tolerance = c.get_double("truncation.tolerance", p.truncation_tolerance);
        for (double v : p.g)
            if (!(v > 0.0)) throw ConfigError("squeezed cavity: sweep.g entries must be positive");
        if (!(p.dB >= 0.0) || !(p.omega_M > 0.0) || !(p.epsilon > 0.0) || p.gamma < 0.0 || !(p.kappa > 0.0))
            throw ConfigError("squeezed cavity: bad model parameters");
        if (p.truncation_extra.size() != 2) throw ConfigError("squeezed cavity: truncation.extra needs 2 entries");
        return p;
    }
};

struct SqueezedCavityPoint {
    double g2_alpha = 0.0, g2_a = 0.0, n_alpha = 0.0, n_a = 0.0;
};

// Steady state with omega_d at the one-photon Kerr resonance of the alpha mode.
inline SqueezedCavityPoint squeezed_cavity_point(double g, double r_c, const SqueezedCavitySweepParams& p,
                                                 const std::vector<std::size_t>& dims) {
    const auto space = make_space(dims, {"alpha", "mech"});
    SqueezedCavityParams sp;
    sp.g = g;
    sp.omega_M = p.omega_M;
    sp.r_c = r_c;
    sp.epsilon = p.epsilon;
    sp.gamma = p.gamma;
    sp.kappa = p.kappa;
    const auto m = build_squeezed_cavity_model(space, sp);
    SteadyStateOptions so;
    so.charge = number_charge(space, {"alpha"});
    const auto rho = steady_state(build_liouvillian(m.H, m.dissipators), so);
    SqueezedCavityPoint out;
    out.g2_alpha = g2_zero(rho, m.alpha);
    out.g2_a = g2_zero(rho, m.a_real);
    out.n_alpha = expectation(rho, m.alpha.adjoint() * m.alpha).real();
    out.n_a = expectation(rho, m.a_real.adjoint() * m.a_real).real();
    return out;
}

inline ScenarioResult run_squeezed_cavity(const SqueezedCavitySweepParams& p) {
    ScenarioResult res;
    res.scenario = "figS3_squeezed_cavity";
    const double r_c = r_from_dB(p.dB);
    const std::size_t n = p.g.size();
    std::vector<SqueezedCavityPoint> sq(n), base(n), big(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            sq[i] = squeezed_cavity_point(p.g[i], r_c, p, p.dims);
            base[i] = squeezed_cavity_point(p.g[i], 0.0, p, p.dims);
            if (p.truncation_check) big[i] = squeezed_cavity_point(p.g[i], r_c, p, enlarge(p.dims, p.truncation_extra));
        },
        p.threads);

    const double c2 = std::cosh(2.0 * r_c);
    CsvTable t({"g", "kerr", "omega_d", "g2_alpha", "g2_a", "g2_a_unsqueezed", "n_alpha", "n_a"});
    nlohmann::json pj = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const double K = p.g[i] * p.g[i] * c2 * c2 / p.omega_M;
        t.add_row({p.g[i], K, -K, sq[i].g2_alpha, sq[i].g2_a, base[i].g2_a, sq[i].n_alpha, sq[i].n_a});
        pj.push_back({{"g", p.g[i]}, {"g2_alpha", sq[i].g2_alpha}, {"g2_a", sq[i].g2_a}, {"g2_a_unsqueezed", base[i].g2_a}});
        if (p.truncation_check) {
            const std::string tag = "[g=" + fmt_num(p.g[i]) + "]";
            res.truncation.push_back(
                {"g2_alpha" + tag, sq[i].g2_alpha, big[i].g2_alpha, p.truncation_tolerance * sq[i].g2_alpha});
            res.truncation.push_back({"g2_a" + tag, sq[i].g2_a, big[i].g2_a, p.truncation_tolerance * sq[i].g2_a});
        }
    }
    res.add_table("figS3_squeezed_cavity.csv", std::move(t));
    const double sv = 3.0 + 1.0 / std::pow(std::sinh(r_c), 2);
    res.summary = {{"r_c", r_c}, {"squeezed_vacuum_g2", sv}, {"points", pj}};

    // The lab photons stay bunched while the Kerr blockade acts on alpha only.
    double min_a = std::numeric_limits<double>::infinity();
    for (const auto& s : sq) min_a = std::min(min_a, s.g2_a);
    res.check("lab_photons_bunched", min_a >= 1.0, min_a, 1.0, "minimum g2 of a over the sweep");
    if (n > 0) {
        const auto lo = std::min_element(p.g.begin(), p.g.end()) - p.g.begin();
        const auto hi = std::max_element(p.g.begin(), p.g.end()) - p.g.begin();
        res.check("alpha_blockade_at_largest_g", sq[hi].g2_alpha < 1.0, sq[hi].g2_alpha, 1.0);
        res.check("weak_coupling_matches_squeezed_vacuum", std::abs(sq[lo].g2_a - sv) < 0.3, sq[lo].g2_a, sv,
                  "g2 of a at the smallest g against 3 + 1/sinh^2 r_c");
    }
    return res;
}

} // namespace optoamp
