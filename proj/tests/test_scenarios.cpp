#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "optoamp/scenarios.hpp"

using namespace optoamp;
namespace fs = std::filesystem;

namespace {

// A cut-down blockade sweep: two points, no optimizer, tiny truncation.
const char* kSmallSweep = R"(
scenario = "fig3_g2_sweep"
schema = 1
[truncation]
dims = [3, 3, 6]
check = false
[optimizer]
enabled = false
[sweep]
dB = [0, 20]
)";

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("optoamp_scen_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST(Registry, KnowsAllScenarios) {
    for (const char* id : {"fig2_td", "fig3_g2_sweep", "fig4_wigner_protocol", "figS1_gaussian_compare",
                           "figS2_decay", "figS3_squeezed_cavity", "analytics_tables", "validate"})
        EXPECT_NO_THROW(find_scenario(id)) << id;
    EXPECT_THROW(find_scenario("fig9"), ConfigError);
}

TEST(RunScenario, DeterministicOutputAndManifest) {
    const auto d1 = scratch("det1"), d2 = scratch("det2");
    const auto r1 = run_scenario("fig3_g2_sweep", Config::parse(kSmallSweep), d1, 1);
    const auto r2 = run_scenario("fig3_g2_sweep", Config::parse(kSmallSweep), d2, 1);
    EXPECT_EQ(r1.exit_code, exit_ok);
    EXPECT_EQ(slurp(d1 / "fig3_g2.csv"), slurp(d2 / "fig3_g2.csv"));
    EXPECT_EQ(r1.manifest.at("manifest_hash"), r2.manifest.at("manifest_hash"));
    ASSERT_TRUE(fs::exists(d1 / "fig3_g2_sweep.manifest.json"));
    const auto m = nlohmann::json::parse(slurp(d1 / "fig3_g2_sweep.manifest.json"));
    EXPECT_EQ(m.at("scenario"), "fig3_g2_sweep");
    EXPECT_EQ(m.at("schema"), 1);
    // resolved defaults are recorded alongside the explicit keys
    EXPECT_TRUE(m.at("parameters").contains("model.kappa"));
    const auto csv = read_csv(d1 / "fig3_g2.csv");
    EXPECT_EQ(csv.size(), 2u);
    // no squeezing: no blockade
    EXPECT_GT(csv.column("g2")[0], 0.99);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST(RunScenario, HashTracksParametersOnly) {
    const auto d = scratch("hash");
    auto c1 = Config::parse(kSmallSweep);
    auto c2 = Config::parse(kSmallSweep);
    c2.apply_override("run.threads=2");
    auto c3 = Config::parse(kSmallSweep);
    c3.apply_override("model.kappa=1.5");
    const auto h1 = run_scenario("fig3_g2_sweep", c1, d).manifest.at("manifest_hash");
    const auto h2 = run_scenario("fig3_g2_sweep", c2, d).manifest.at("manifest_hash");
    const auto h3 = run_scenario("fig3_g2_sweep", c3, d).manifest.at("manifest_hash");
    EXPECT_EQ(h1, h2);
    EXPECT_NE(h1, h3);
    fs::remove_all(d);
}

TEST(RunScenario, ConfigProblemsMapToExitTwo) {
    const auto d = scratch("bad");
    auto expect_config_error = [&](const std::string& text, const std::string& id = "fig3_g2_sweep") {
        try {
            run_scenario(id, Config::parse(text), d);
            ADD_FAILURE() << "no error for:\n" << text;
        } catch (...) {
            EXPECT_EQ(exit_code_for(std::current_exception()), exit_config) << text;
        }
    };
    expect_config_error(std::string(kSmallSweep) + "typo_key = 1\n");
    expect_config_error("scenario = \"fig3_g2_sweep\"\nschema = 2\n");
    expect_config_error("scenario = \"figS2_decay\"\n");
    expect_config_error(std::string(kSmallSweep) + "[extra]\nkappa = -1\n");
    fs::remove_all(d);
}

TEST(ExitCodes, ExceptionMapping) {
    auto code = [](auto ex) {
        try {
            throw ex;
        } catch (...) {
            return exit_code_for(std::current_exception());
        }
    };
    EXPECT_EQ(code(ConfigError("x")), exit_config);
    EXPECT_EQ(code(ConvergenceError("x")), exit_solver);
    EXPECT_EQ(code(UndefinedObservable("x")), exit_solver);
    EXPECT_EQ(code(TruncationError("x")), exit_truncation);
    EXPECT_EQ(code(InvariantError("x")), exit_check_failed);
    EXPECT_EQ(code(std::runtime_error("x")), exit_solver);
}

TEST(ScenarioId, RequiresScenarioKey) {
    EXPECT_THROW(scenario_id(Config::parse("schema = 1")), ConfigError);
    EXPECT_EQ(scenario_id(Config::parse("scenario = \"validate\"")), "validate");
}

TEST(ShippedConfigs, ParseAndNameTheirScenario) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(fs::path(OPTOAMP_SOURCE_DIR) / "configs")) {
        if (e.path().extension() != ".toml") continue;
        const auto c = Config::load(e.path());
        const auto id = scenario_id(c);
        EXPECT_EQ(id, e.path().stem().string());
        EXPECT_NO_THROW(find_scenario(id));
        ++n;
    }
    EXPECT_EQ(n, scenario_registry().size());
}
