// scenarios/analytics_tables.hpp — Green's functions, kernels and heating rates on frequency grids

#pragma once

#include "optoamp/analytics.hpp"
#include "optoamp/models.hpp"
#include "optoamp/scenarios/common.hpp"

namespace optoamp {

struct AnalyticsParams {
    double dB = 30.0;
    double E_beta = 1.0;
    double gamma = 1e-3;
    double nbar_m = 0.5;
    double g = 0.1;
    double omega_span = 3.0; // grid covers [-span, span] * E_beta
    std::size_t points = 601;
    // time-domain kernel
    double kernel_omega_max = 40.0;
    std::size_t kernel_points = 400001;
    double kernel_window = 10.0;
    double kernel_t_min = -5.0, kernel_t_max = 20.0;
    std::size_t kernel_times = 251;
    double causality_margin = 1.0; // t <= -margin counts as "before the kick"
    // heating-rate table at the pulsed-protocol parameters
    double heating_g = 0.3, heating_gamma = 1e-4, heating_nbar_m = 0.5, heating_E_beta_factor = 2.0;
    std::vector<double> heating_dB{20.0, 25.0, 30.0, 35.0, 40.0};

    static AnalyticsParams read(const Config& c) {
        AnalyticsParams p;
        p.dB = c.get_double("model.dB", p.dB);
        p.E_beta = c.get_double("model.E_beta", p.E_beta);
        p.gamma = c.get_double("model.gamma", p.gamma);
        p.nbar_m = c.get_double("model.nbar_m", p.nbar_m);
        p.g = c.get_double("model.g", p.g);
        p.omega_span = c.get_double("grid.omega_span", p.omega_span);
        p.points = c.get_size("grid.points", p.points);
        p.kernel_omega_max = c.get_double("kernel.omega_max", p.kernel_omega_max);
        p.kernel_points = c.get_size("kernel.points", p.kernel_points);
        p.kernel_window = c.get_double("kernel.window", p.kernel_window);
        p.kernel_t_min = c.get_double("kernel.t_min", p.kernel_t_min);
        p.kernel_t_max = c.get_double("kernel.t_max", p.kernel_t_max);
        p.kernel_times = c.get_size("kernel.times", p.kernel_times);
        p.causality_margin = c.get_double("kernel.causality_margin", p.causality_margin);
        p.heating_g = c.get_double("heating.g", p.heating_g);
        p.heating_gamma = c.get_double("heating.gamma", p.heating_gamma);
        p.heating_nbar_m = c.get_double("heating.nbar_m", p.heating_nbar_m);
        p.heating_E_beta_factor = c.get_double("heating.E_beta_factor", p.heating_E_beta_factor);
        p.heating_dB = c.get_doubles("heating.dB", p.heating_dB);
        if (p.points < 2 || p.kernel_points < 2 || p.kernel_times < 2) throw ConfigError("analytics: grids too small");
        if (!(p.kernel_t_max > p.kernel_t_min)) throw ConfigError("analytics: kernel.t_max must exceed kernel.t_min");
        if (!(p.gamma > 0.0)) throw ConfigError("analytics: model.gamma must be positive");
        return p;
    }

    MechanicalResponse response() const {
        auto m = MechanicalResponse::from_frame(r_from_dB(dB), E_beta, gamma, nbar_m);
        m.validate();
        return m;
    }
};

// Peak-normalized distance max|a - b| / max|a| between two sampled functions.
inline double peak_normalized_distance(const std::vector<cplx_t>& a, const std::vector<cplx_t>& b) {
    if (a.size() != b.size() || a.empty()) throw ConfigError("peak_normalized_distance: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num = std::max(num, std::abs(a[k] - b[k]));
        den = std::max(den, std::abs(a[k]));
    }
    return num / den;
}

struct CausalityReport {
    std::vector<double> times;
    std::vector<cplx_t> values;
    double leakage = 0.0; // max |f(t <= -margin)| / max |f|
};

// Windowed inverse transform of G^R on a wide grid; G^R(t) must vanish before the kick.
inline CausalityReport retarded_in_time(const AnalyticsParams& p, const MechanicalResponse& m) {
    const auto w = linspace(-p.kernel_omega_max, p.kernel_omega_max, p.kernel_points);
    std::vector<cplx_t> G;
    G.reserve(w.size());
    for (double x : w) G.push_back(greens_retarded(x, m).first);
    CausalityReport rep;
    rep.times = linspace(p.kernel_t_min, p.kernel_t_max, p.kernel_times);
    rep.values = inverse_fourier(w, G, rep.times, p.kernel_window);
    double before = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        peak = std::max(peak, std::abs(rep.values[k]));
        if (rep.times[k] <= -p.causality_margin) before = std::max(before, std::abs(rep.values[k]));
    }
    rep.leakage = before / peak;
    return rep;
}

inline ScenarioResult run_analytics(const AnalyticsParams& p) {
    ScenarioResult res;
    res.scenario = "analytics_tables";
    const auto m = p.response();
    const auto w = linspace(-p.omega_span * p.E_beta, p.omega_span * p.E_beta, p.points);
    const auto k = interaction_kernels(w, p.g, m);

    CsvTable gt({"omega", "GR_re", "GR_im", "GRt_re", "GRt_im", "GK_re", "GK_im", "GKt_re", "GKt_im", "GK_large_r_re",
                 "GK_large_r_im", "Lambda_re", "Lambda_im", "Lambdat_re", "Lambdat_im"});
    std::vector<cplx_t> gk, gkl;
    double max_gk_im = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto [gr, grt] = greens_retarded(w[i], m);
        const auto [K, Kt] = greens_keldysh(w[i], m);
        const auto KL = greens_keldysh_large_r(w[i], m);
        gk.push_back(K);
        gkl.push_back(KL);
        max_gk_im = std::max(max_gk_im, K.imag());
        gt.add_row({w[i], gr.real(), gr.imag(), grt.real(), grt.imag(), K.real(), K.imag(), Kt.real(), Kt.imag(),
                    KL.real(), KL.imag(), k.Lambda[i].real(), k.Lambda[i].imag(), k.Lambda_tilde[i].real(),
                    k.Lambda_tilde[i].imag()});
    }
    res.add_table("greens_functions.csv", std::move(gt));

    const auto cz = retarded_in_time(p, m);
    CsvTable kt({"t", "GR_re", "GR_im"});
    for (std::size_t i = 0; i < cz.times.size(); ++i) kt.add_row({cz.times[i], cz.values[i].real(), cz.values[i].imag()});
    res.add_table("retarded_time_domain.csv", std::move(kt));

    CsvTable ht({"dB", "r", "g_tilde", "E_beta", "Lambda", "Gamma_per_partner_photon"});
    for (double dB : p.heating_dB) {
        const double r = r_from_dB(dB);
        const double gtl = 0.5 * p.heating_g * std::exp(r);
        const double Eb = p.heating_E_beta_factor * gtl;
        ht.add_row({dB, r, gtl, Eb, gtl * gtl / Eb, heating_rate(p.heating_gamma, p.heating_g, Eb, r, p.heating_nbar_m, 1.0)});
    }
    res.add_table("heating_rates.csv", std::move(ht));

    const auto [nn, bb] = beta_covariances(m);
    const auto [gr0, grt0] = greens_retarded(0.0, m);
    res.check("keldysh_imaginary_part_nonpositive", max_gk_im <= 0.0, max_gk_im, 0.0);
    res.check("retarded_causality", cz.leakage <= 1e-3, cz.leakage, 1e-3, "max |G^R(t<0)| / peak");
    res.summary = {{"r", m.r()},
                   {"E_beta", m.E_beta()},
                   {"Delta", m.Delta},
                   {"lambda", m.lambda},
                   {"beta_occupation", nn},
                   {"beta_anomalous_re", bb.real()},
                   {"beta_anomalous_im", bb.imag()},
                   {"half_g2_GR0_abs", 0.5 * p.g * p.g * std::abs(gr0)},
                   {"Lambda", std::pow(0.5 * p.g * std::exp(m.r()), 2) / m.E_beta()},
                   {"keldysh_large_r_peak_distance", peak_normalized_distance(gk, gkl)},
                   {"causality_leakage", cz.leakage}};
    return res;
}

} // namespace optoamp
