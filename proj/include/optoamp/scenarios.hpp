// scenarios.hpp — scenario registry, run manifests and exit-code mapping

#pragma once

#include <exception>
#include <filesystem>
#include <functional>
#include <optional>

#include "optoamp/scenarios/analytics_tables.hpp"
#include "optoamp/scenarios/blockade.hpp"
#include "optoamp/scenarios/fig2.hpp"
#include "optoamp/scenarios/squeezed_cavity.hpp"
#include "optoamp/scenarios/validate.hpp"
#include "optoamp/scenarios/wigner_protocol.hpp"

namespace optoamp {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_solver = 3,
    exit_check_failed = 4,
    exit_truncation = 5,
};

struct ScenarioInfo {
    std::string id;
    std::string description;
    // Reads its parameters from the config, then runs with the given worker count.
    std::function<ScenarioResult(const Config&, std::size_t threads)> run;
};

inline const std::vector<ScenarioInfo>& scenario_registry() {
    static const std::vector<ScenarioInfo> reg = {
        {"fig2_td", "Bogoliubov-mode population during transitionless and sudden squeezing ramps",
         [](const Config& c, std::size_t) { return run_fig2(RampParams::read(c)); }},
        {"fig3_g2_sweep", "optimized steady-state g2 of the symmetric mode versus squeezing",
         [](const Config& c, std::size_t th) {
             auto p = BlockadeSweepParams::read(c);
             p.threads = th;
             return run_fig3(p);
         }},
        {"fig4_wigner_protocol", "pulsed protocol: populations and cavity Wigner functions",
         [](const Config& c, std::size_t th) {
             WignerProtocolParams def;
             def.decay = false;
             auto p = WignerProtocolParams::read(c, def);
             p.threads = th;
             return run_wigner_scenario(p, "fig4_wigner_protocol", true);
         }},
        {"figS1_gaussian_compare", "full g2 against the Gaussian extrapolation",
         [](const Config& c, std::size_t th) {
             BlockadeSweepParams def;
             def.g = {0.01, 0.03, 0.1, 0.3};
             def.dB = {20.0};
             auto p = BlockadeSweepParams::read(c, def);
             p.threads = th;
             return run_gaussian_compare(p);
         }},
        {"figS2_decay", "free decay of the prepared cavity state against bare cavity decay",
         [](const Config& c, std::size_t th) {
             WignerProtocolParams def;
             def.dB = {30.0};
             auto p = WignerProtocolParams::read(c, def);
             p.threads = th;
             return run_wigner_scenario(p, "figS2_decay", false);
         }},
        {"figS3_squeezed_cavity", "parametrically driven cavity: alpha-mode versus real-photon g2",
         [](const Config& c, std::size_t th) {
             auto p = SqueezedCavitySweepParams::read(c);
             p.threads = th;
             return run_squeezed_cavity(p);
         }},
        {"analytics_tables", "Green's functions, interaction kernels and heating rates",
         [](const Config& c, std::size_t) { return run_analytics(AnalyticsParams::read(c)); }},
        {"validate", "fast invariant suite", [](const Config& c, std::size_t) { return run_validate(ValidateParams::read(c)); }},
    };
    return reg;
}

inline const ScenarioInfo& find_scenario(std::string_view id) {
    for (const auto& s : scenario_registry())
        if (s.id == id) return s;
    std::string known;
    for (const auto& s : scenario_registry()) known += " " + s.id;
    throw ConfigError("unknown scenario '" + std::string(id) + "'; known:" + known);
}

// Hash of the resolved parameters; worker count and output location do not enter.
inline std::string manifest_hash(const nlohmann::json& resolved) {
    nlohmann::json h = resolved;
    h.erase("run.threads");
    h.erase("run.out_dir");
    return hex64(fnv1a64(h.dump()));
}

struct RunOutcome {
    ScenarioResult result;
    nlohmann::json manifest;
    std::vector<std::filesystem::path> files;
    int exit_code = exit_ok;
};

// Scenario id named by the config's top-level `scenario` key.
inline std::string scenario_id(const Config& c) {
    if (!c.has("scenario")) throw ConfigError(c.origin() + ": missing top-level 'scenario' key");
    return c.get_string("scenario", "");
}

// Resolves parameters, runs the scenario and writes CSVs plus <id>.manifest.json into the output
// directory (argument, else run.out_dir, else out/<id>). Exceptions escape; map them with exit_code_for().
inline RunOutcome run_scenario(const std::string& id, const Config& c,
                               const std::optional<std::filesystem::path>& out_dir_arg = std::nullopt,
                               std::size_t threads = 0) {
    const auto& info = find_scenario(id);
    const std::filesystem::path cfg_dir = c.get_string("run.out_dir", "out/" + id);
    const std::filesystem::path out_dir = out_dir_arg ? *out_dir_arg : cfg_dir;
    const long schema = c.get_int("schema", config_schema_version);
    if (schema != config_schema_version)
        throw ConfigError("config schema " + std::to_string(schema) + " is not supported (expected " +
                          std::to_string(config_schema_version) + ")");
    const std::string declared = c.get_string("scenario", id);
    if (declared != id) throw ConfigError("config is for scenario '" + declared + "', not '" + id + "'");
    // explicit argument, else run.threads, else the environment default
    const std::size_t cfg_threads = c.get_size("run.threads", 0);
    threads = resolve_threads(threads > 0 ? threads : cfg_threads);

    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;
    out.result = info.run(c, threads);
    c.check_all_used();
    const double elapsed = seconds_since(t0);
    const std::string hash = manifest_hash(c.resolved());

    const std::vector<std::pair<std::string, std::string>> header{
        {"scenario", id}, {"schema", std::to_string(config_schema_version)}, {"manifest_hash", hash}};
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [name, table] : out.result.tables) {
        const auto path = out_dir / name;
        write_file(path, csv_with_header(header, table.body()));
        out.files.push_back(path);
        files.push_back(name);
    }

    nlohmann::json checks = nlohmann::json::array();
    for (const auto& ch : out.result.checks)
        checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"value", ch.value}, {"threshold", ch.threshold},
                          {"detail", ch.detail}});
    nlohmann::json trunc = nlohmann::json::array();
    for (const auto& t : out.result.truncation)
        trunc.push_back({{"observable", t.observable}, {"value", t.value}, {"enlarged_value", t.enlarged_value},
                         {"tolerance", t.tolerance}, {"passed", t.passed()}});

    if (!out.result.checks_passed()) out.exit_code = exit_check_failed;
    else if (!out.result.truncation_passed()) out.exit_code = exit_truncation;

    out.manifest = {{"scenario", id},
                    {"schema", config_schema_version},
                    {"config_origin", c.origin()},
                    {"parameters", c.resolved()},
                    {"manifest_hash", hash},
                    {"threads", threads},
                    {"out_dir", out_dir.string()},
                    {"files", files},
                    {"summary", out.result.summary},
                    {"checks", checks},
                    {"truncation", trunc},
                    {"checks_passed", out.result.checks_passed()},
                    {"truncation_passed", out.result.truncation_passed()},
                    {"exit_code", out.exit_code},
                    {"wall_seconds", elapsed}};
    const auto mpath = out_dir / (id + ".manifest.json");
    write_file(mpath, out.manifest.dump(2) + "\n");
    out.files.push_back(mpath);
    return out;
}

// Exit code for an exception thrown by run_scenario.
inline int exit_code_for(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError&) {
        return exit_config;
    } catch (const UndefinedObservable&) {
        return exit_solver;
    } catch (const SolverError&) {
        return exit_solver;
    } catch (const TruncationError&) {
        return exit_truncation;
    } catch (const InvariantError&) {
        return exit_check_failed;
    } catch (...) {
        return exit_solver;
    }
}

} // namespace optoamp
