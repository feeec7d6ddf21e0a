// optoamp — command-line runner for the experiment scenarios

#include <iostream>

#include "CLI11.hpp"
#include "optoamp/scenarios.hpp"

namespace {

using optoamp::Config;

struct Common {
    std::string out_dir;
    std::size_t threads = 0;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& o) {
    sub->add_option("--out-dir", o.out_dir, "output directory (overrides run.out_dir)");
    sub->add_option("--threads", o.threads, "worker threads (default: run.threads, then OPTOAMP_THREADS, then 1)");
    sub->add_option("--override", o.overrides, "key=value applied after the config file")->allow_extra_args(false);
}

Config load(const std::string& path, const Common& o) {
    Config c = path.empty() ? Config::parse("", "<defaults>") : Config::load(path);
    for (const auto& kv : o.overrides) c.apply_override(kv);
    return c;
}

int report(const optoamp::RunOutcome& r) {
    const auto& res = r.result;
    std::size_t failed = 0;
    for (const auto& ch : res.checks)
        if (!ch.passed) {
            ++failed;
            std::cerr << "check failed: " << ch.name << " value=" << optoamp::fmt_num(ch.value)
                      << " threshold=" << optoamp::fmt_num(ch.threshold) << '\n';
        }
    for (const auto& t : res.truncation)
        if (!t.passed())
            std::cerr << "truncation: " << t.observable << " " << optoamp::fmt_num(t.value) << " vs "
                      << optoamp::fmt_num(t.enlarged_value) << " (tol " << optoamp::fmt_num(t.tolerance) << ")\n";
    std::cout << res.scenario << ": " << res.checks.size() - failed << "/" << res.checks.size() << " checks passed, "
              << res.truncation.size() << " truncation comparisons, hash "
              << r.manifest.at("manifest_hash").get<std::string>() << '\n';
    for (const auto& f : r.files) std::cout << "  wrote " << f.string() << '\n';
    return r.exit_code;
}

// Runs the config's scenario after checking it belongs to the subcommand's family.
int run(const std::string& path, const Common& o, const std::vector<std::string>& allowed,
        const std::string& fallback_id = {}) {
    try {
        const Config c = load(path, o);
        const std::string id = (path.empty() || !c.has("scenario")) && !fallback_id.empty() ? fallback_id
                                                                                             : optoamp::scenario_id(c);
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), id) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += " " + a;
            throw optoamp::ConfigError("scenario '" + id + "' is not valid here; expected one of:" + list);
        }
        std::optional<std::filesystem::path> out;
        if (!o.out_dir.empty()) out = o.out_dir;
        return report(optoamp::run_scenario(id, c, out, o.threads));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return optoamp::exit_code_for(std::current_exception());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parametric mechanical amplification in two-cavity optomechanics: scenario runner"};
    app.require_subcommand(1);

    Common o;
    std::string cfg;

    auto* run_cmd = app.add_subcommand("run", "run any scenario named by the config");
    run_cmd->add_option("config", cfg, "scenario config file")->required()->check(CLI::ExistingFile);
    add_common(run_cmd, o);

    auto* sweep_cmd = app.add_subcommand("sweep", "g2 sweeps: fig3_g2_sweep, figS1_gaussian_compare, figS3_squeezed_cavity");
    sweep_cmd->add_option("config", cfg, "scenario config file")->required()->check(CLI::ExistingFile);
    add_common(sweep_cmd, o);

    auto* wigner_cmd = app.add_subcommand("wigner", "pulsed protocol: fig4_wigner_protocol, figS2_decay");
    wigner_cmd->add_option("config", cfg, "scenario config file")->required()->check(CLI::ExistingFile);
    add_common(wigner_cmd, o);

    auto* analytics_cmd = app.add_subcommand("analytics", "Green's-function and heating-rate tables");
    analytics_cmd->add_option("config", cfg, "scenario config file (defaults if omitted)")->check(CLI::ExistingFile);
    add_common(analytics_cmd, o);

    auto* validate_cmd = app.add_subcommand("validate", "fast invariant suite");
    validate_cmd->add_option("--config", cfg, "optional config file")->check(CLI::ExistingFile);
    add_common(validate_cmd, o);

    auto* list_cmd = app.add_subcommand("list", "list known scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : optoamp::exit_config;
    }

    if (*list_cmd) {
        for (const auto& s : optoamp::scenario_registry()) std::cout << s.id << "\t" << s.description << '\n';
        return 0;
    }
    if (*run_cmd) return run(cfg, o, {});
    if (*sweep_cmd) return run(cfg, o, {"fig3_g2_sweep", "figS1_gaussian_compare", "figS3_squeezed_cavity"});
    if (*wigner_cmd) return run(cfg, o, {"fig4_wigner_protocol", "figS2_decay"});
    if (*analytics_cmd) return run(cfg, o, {"analytics_tables"}, "analytics_tables");
    if (*validate_cmd) return run(cfg, o, {"validate"}, "validate");
    return optoamp::exit_config;
}
