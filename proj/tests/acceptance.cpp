// Figure-reproduction acceptance run: every scenario at its default configuration, one
// PASS/FAIL line per criterion followed by the measured numbers. Exit status 1 if any fail.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "optoamp/scenarios.hpp"

using namespace optoamp;
namespace fs = std::filesystem;

namespace {

struct Line {
    std::string name;
    bool pass = false;
    std::vector<std::string> details;
};

std::vector<Line> g_lines;
std::map<std::string, RunOutcome> g_runs;
std::map<std::string, std::string> g_errors;

std::string f(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

const RunOutcome* run(const std::string& id, const fs::path& root) {
    if (g_runs.count(id)) return &g_runs.at(id);
    if (g_errors.count(id)) return nullptr;
    std::fprintf(stderr, "running %s ...\n", id.c_str());
    try {
        auto c = Config::parse("scenario = \"" + id + "\"\n", "<acceptance>");
        g_runs.emplace(id, run_scenario(id, c, root / id));
        return &g_runs.at(id);
    } catch (const std::exception& e) {
        g_errors[id] = e.what();
        return nullptr;
    }
}

// Evaluates one criterion; a scenario failure turns into a FAIL line with the error text.
void criterion(const std::string& name, const std::vector<std::string>& ids, const fs::path& root,
               const std::function<void(Line&)>& body) {
    Line l{name, true, {}};
    for (const auto& id : ids)
        if (!run(id, root)) {
            l.pass = false;
            l.details.push_back(id + " did not complete: " + g_errors.at(id));
        }
    if (l.pass) {
        try {
            body(l);
        } catch (const std::exception& e) {
            l.pass = false;
            l.details.push_back(std::string("evaluation error: ") + e.what());
        }
    }
    std::printf("%s  %s\n", l.pass ? "PASS" : "FAIL", l.name.c_str());
    for (const auto& d : l.details) std::printf("      %s\n", d.c_str());
    std::fflush(stdout);
    g_lines.push_back(std::move(l));
}

void expect(Line& l, bool ok, const std::string& what) {
    l.pass = l.pass && ok;
    l.details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
}

const nlohmann::json& check_named(const RunOutcome& r, const std::string& name) {
    for (const auto& c : r.manifest.at("checks"))
        if (c.at("name") == name) return c;
    throw std::runtime_error("no check named " + name);
}

const nlohmann::json& run_at(const RunOutcome& r, double dB) {
    for (const auto& j : r.result.summary.at("runs"))
        if (std::abs(j.at("dB").get<double>() - dB) < 1e-9) return j;
    throw std::runtime_error("no run at " + f(dB) + " dB");
}

} // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");

    criterion("fig2: transitionless ramp keeps the Bogoliubov vacuum, sudden switch-on does not", {"fig2_td"},
              root, [](Line& l) {
                  const auto& s = g_runs.at("fig2_td").result.summary;
                  const double td = s.at("nbeta_td_final"), s2 = s.at("sinh2_r");
                  const double mean = s.at("nbeta_sudden_mean"), lo = s.at("nbeta_sudden_min"),
                               hi = s.at("nbeta_sudden_max");
                  expect(l, td < 1e-2, "TD final <beta^dag beta> = " + f(td) + " < 1e-2");
                  expect(l, std::abs(mean - s2) <= 0.1 * s2 && lo >= 0.9 * s2 && hi <= 1.1 * s2,
                         "sudden <beta^dag beta> mean " + f(mean) + " in [" + f(lo) + ", " + f(hi) +
                             "], band sinh^2 r = " + f(s2) + " +/- 10%");
              });

    criterion("thermometry: steady-state Bogoliubov moments at e^{2r} = 10, n_M = 0.5, gamma = 1e-3 E",
              {"validate"}, root, [](Line& l) {
                  const auto& r = g_runs.at("validate");
                  const double nn = check_named(r, "thermometry.occupation").at("value");
                  expect(l, std::abs(nn - 4.55) <= 0.05 * 4.55, "<beta^dag beta> = " + f(nn) + " vs 4.55 (5%)");
                  const auto& an = check_named(r, "thermometry.anomalous");
                  const double dev = an.at("value");
                  expect(l, an.at("passed").get<bool>(),
                         "<beta beta> relative deviation " + f(dev) +
                             " from the closed form i gamma (n + 1/2) sinh 2r / (2E - i gamma) (10%)");
              });

    criterion("fig3: optimized blockade of the symmetric mode at g = 0.1", {"fig3_g2_sweep"}, root, [](Line& l) {
        const auto& t = g_runs.at("fig3_g2_sweep").result.table("fig3_g2.csv");
        const auto g = t.column("g"), dB = t.column("dB"), er = t.column("exp_r"), gt = t.column("g_tilde"),
                   g2 = t.column("g2");
        auto at = [&](double d) {
            for (std::size_t i = 0; i < dB.size(); ++i)
                if (std::abs(dB[i] - d) < 1e-9 && std::abs(g[i] - 0.1) < 1e-12) return g2[i];
            throw std::runtime_error("sweep lacks " + f(d) + " dB");
        };
        expect(l, std::abs(at(20) - 0.8) <= 0.1, "20 dB: g2 = " + f(at(20)) + " (0.8 +/- 0.1)");
        expect(l, std::abs(at(30) - 0.3) <= 0.1, "30 dB: g2 = " + f(at(30)) + " (0.3 +/- 0.1)");
        expect(l, at(0) >= 0.99, "r = 0: g2 = " + f(at(0)) + " >= 0.99");
        double worst = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < g2.size(); ++i)
            if (gt[i] >= 0.3 && gt[i] <= 3.0) {
                const double fit = 1.0 / (1.0 + 0.8 * gt[i] * gt[i]);
                worst = std::max(worst, std::abs(g2[i] - fit) / fit);
                ++n;
            }
        expect(l, n >= 3 && worst <= 0.2,
               "1/(1 + 0.8 g~^2) over " + std::to_string(n) + " points with g~ in [0.3, 3]: worst deviation " + f(worst));
        // first crossing of g2 = 0.5, linear in e^r
        double cross = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i + 1 < g2.size(); ++i)
            if (g2[i] > 0.5 && g2[i + 1] <= 0.5) {
                cross = er[i] + (0.5 - g2[i]) * (er[i + 1] - er[i]) / (g2[i + 1] - g2[i]);
                break;
            }
        const double want = 2.2 / 0.1;
        expect(l, std::isfinite(cross) && std::abs(cross - want) <= 0.25 * want,
               "g2 = 0.5 reached at e^r = " + f(cross) + " vs 2.2/g = " + f(want) + " (25%)");
    });

    criterion("fig4: cavity-1 Wigner negativity at tau_int/4 appears at 30 dB and is lost at 25 dB",
              {"fig4_wigner_protocol"}, root, [](Line& l) {
                  const auto& t = g_runs.at("fig4_wigner_protocol").result.table("fig4_minW.csv");
                  const auto dB = t.column("dB"), s = t.column("t_over_tau_int"), w = t.column("minW_cav1");
                  auto at = [&](double d) {
                      for (std::size_t i = 0; i < dB.size(); ++i)
                          if (std::abs(dB[i] - d) < 1e-9 && std::abs(s[i] - 0.25) < 1e-9) return w[i];
                      throw std::runtime_error("no tau_int/4 snapshot at " + f(d) + " dB");
                  };
                  expect(l, at(30) < -0.01, "30 dB: min W = " + f(at(30)) + " < -0.01");
                  expect(l, at(25) >= -1e-3, "25 dB: min W = " + f(at(25)) + " >= -1e-3");
              });

    criterion("figS2: emitted state decays like a bare cavity (g = 0.3 vs g = 0)", {"figS2_decay"}, root,
              [](Line& l) {
                  const double fmin = run_at(g_runs.at("figS2_decay"), 30.0).at("decay").at("min_fidelity");
                  expect(l, fmin >= 0.999, "minimum Uhlmann fidelity over sampled times = " + f(fmin) + " >= 0.999");
              });

    criterion("figS1: Gaussian extrapolation holds at weak coupling and fails at strong coupling",
              {"figS1_gaussian_compare"}, root, [](Line& l) {
                  const auto& t = g_runs.at("figS1_gaussian_compare").result.table("figS1_gaussian.csv");
                  const auto g = t.column("g"), dev = t.column("relative_deviation");
                  bool any_strong = false;
                  for (std::size_t i = 0; i < g.size(); ++i) {
                      if (std::abs(g[i] - 0.01) < 1e-12)
                          expect(l, dev[i] < 0.01, "g = 0.01: |g2 - g2_wick|/g2 = " + f(dev[i]) + " < 1%");
                      if (g[i] >= 0.3 - 1e-12) {
                          any_strong = true;
                          expect(l, dev[i] > 0.1, "g = " + f(g[i]) + ": |g2 - g2_wick|/g2 = " + f(dev[i]) + " > 10%");
                      }
                  }
                  expect(l, any_strong, "sweep includes g >= 0.3");
              });

    criterion("figS3: squeezed-cavity blockade is confined to the alpha mode", {"figS3_squeezed_cavity"}, root,
              [](Line& l) {
                  const auto& t = g_runs.at("figS3_squeezed_cavity").result.table("figS3_squeezed_cavity.csv");
                  const auto g = t.column("g"), ga = t.column("g2_alpha"), gr = t.column("g2_a");
                  const double min_a = *std::min_element(gr.begin(), gr.end());
                  expect(l, ga.back() < 1.0, "largest g = " + f(g.back()) + ": g2_alpha = " + f(ga.back()) + " < 1");
                  expect(l, min_a >= 1.0, "min over sweep of g2_a = " + f(min_a) + " >= 1");
                  expect(l, std::abs(gr.front() - 3.1) <= 0.3, "smallest g: g2_a = " + f(gr.front()) + " (3.1 +/- 0.3)");
              });

    criterion("properties: invariants, polaron spectrum, TD exactness, Green's limits, heating, RWA",
              {"validate", "analytics_tables", "fig4_wigner_protocol"}, root, [](Line& l) {
                  for (const auto& c : g_runs.at("validate").manifest.at("checks"))
                      expect(l, c.at("passed").get<bool>(),
                             c.at("name").get<std::string>() + " = " + f(c.at("value").get<double>()) +
                                 " (threshold " + f(c.at("threshold").get<double>()) + ")");
                  for (const auto& c : g_runs.at("analytics_tables").manifest.at("checks"))
                      expect(l, c.at("passed").get<bool>(),
                             "greens." + c.at("name").get<std::string>() + " = " + f(c.at("value").get<double>()));
                  const auto& r30 = run_at(g_runs.at("fig4_wigner_protocol"), 30.0);
                  const double rate = r30.at("heating_rate"), nj = r30.at("nbar_partner_hold");
                  const double ref = 1.0 / 40.0;
                  expect(l, rate <= 3.0 * ref && rate >= ref / 3.0,
                         "heating rate at 30 dB with simulated partner occupation " + f(nj) + ": " + f(rate) +
                             " vs kappa/40 (factor 3)");
              });

    // every scenario's own state checks (trace, Hermiticity, positivity) and truncation comparisons
    criterion("numerics: state invariants and truncation convergence across all scenario runs", {}, root,
              [](Line& l) {
                  for (const auto& [id, r] : g_runs) {
                      std::size_t bad = 0, nt = 0, badt = 0;
                      for (const auto& c : r.result.checks) bad += c.passed ? 0 : 1;
                      for (const auto& t : r.result.truncation) {
                          ++nt;
                          badt += t.passed() ? 0 : 1;
                      }
                      expect(l, bad == 0 && badt == 0,
                             id + ": " + std::to_string(r.result.checks.size() - bad) + "/" +
                                 std::to_string(r.result.checks.size()) + " checks, " + std::to_string(nt - badt) +
                                 "/" + std::to_string(nt) + " truncation comparisons");
                  }
              });

    std::size_t failed = 0;
    for (const auto& l : g_lines) failed += l.pass ? 0 : 1;
    std::printf("\n%zu/%zu criteria passed\n", g_lines.size() - failed, g_lines.size());
    return failed == 0 ? 0 : 1;
}
