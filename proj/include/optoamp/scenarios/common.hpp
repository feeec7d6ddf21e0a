// scenarios/common.hpp — result containers and helpers shared by the experiment scenarios

#pragma once

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "optoamp/config.hpp"
#include "optoamp/dynamics.hpp"
#include "optoamp/io.hpp"
#include "optoamp/observables.hpp"

namespace optoamp {

// One named pass/fail invariant evaluated by a scenario.
struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

// Outcome of a truncation-adequacy comparison between two truncations.
struct TruncationCheck {
    std::string observable;
    double value = 0.0;
    double enlarged_value = 0.0;
    double tolerance = 0.0;
    bool passed() const { return std::abs(value - enlarged_value) <= tolerance; }
};

struct ScenarioResult {
    std::string scenario;
    std::vector<std::pair<std::string, CsvTable>> tables; // file name -> table
    nlohmann::json summary = nlohmann::json::object();
    std::vector<Check> checks;
    std::vector<TruncationCheck> truncation;

    void add_table(std::string name, CsvTable t) { tables.emplace_back(std::move(name), std::move(t)); }

    const CsvTable& table(std::string_view name) const {
        for (const auto& [n, t] : tables)
            if (n == name) return t;
        throw ConfigError("ScenarioResult: no table '" + std::string(name) + "'");
    }

    void check(std::string name, bool passed, double value, double threshold, std::string detail = {}) {
        checks.push_back({std::move(name), passed, value, threshold, std::move(detail)});
    }

    bool checks_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    bool truncation_passed() const {
        for (const auto& t : truncation)
            if (!t.passed()) return false;
        return true;
    }

    // Merges another result (sub-scenario) under a name prefix.
    void absorb(const ScenarioResult& other, const std::string& prefix) {
        for (const auto& [n, t] : other.tables) tables.emplace_back(prefix + n, t);
        for (auto c : other.checks) {
            c.name = prefix + c.name;
            checks.push_back(std::move(c));
        }
        for (auto t : other.truncation) {
            t.observable = prefix + t.observable;
            truncation.push_back(std::move(t));
        }
        summary[prefix.empty() ? other.scenario : prefix.substr(0, prefix.size() - 1)] = other.summary;
    }
};

inline IntegratorOptions read_integrator(const Config& c, IntegratorOptions def = {}) {
    def.rtol = c.get_double("solver.rtol", def.rtol);
    def.atol = c.get_double("solver.atol", def.atol);
    if (!(def.rtol > 0.0) || !(def.atol > 0.0)) throw ConfigError("solver tolerances must be positive");
    return def;
}

inline std::vector<std::size_t> read_dims(const Config& c, const std::string& key, std::vector<std::size_t> def) {
    auto d = c.get_sizes(key, def);
    if (d.size() != def.size())
        throw ConfigError("config key '" + key + "' needs " + std::to_string(def.size()) + " entries");
    for (auto v : d)
        if (v < 2) throw ConfigError("config key '" + key + "': every truncation must be >= 2");
    return d;
}

inline std::vector<std::size_t> enlarge(std::vector<std::size_t> dims, const std::vector<std::size_t>& extra) {
    for (std::size_t k = 0; k < dims.size() && k < extra.size(); ++k) dims[k] += extra[k];
    return dims;
}

// Trace, Hermiticity and positivity of a state, as recorded checks.
inline void check_state(ScenarioResult& res, const std::string& tag, const DensityMatrix& rho) {
    const double tr = std::abs(rho.trace() - 1.0);
    const double herm = (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff();
    const double mineig = rho.min_eigenvalue();
    res.check(tag + ".trace", tr < 1e-7, tr, 1e-7);
    res.check(tag + ".hermiticity", herm < 1e-9, herm, 1e-9);
    res.check(tag + ".positivity", mineig > -1e-6, mineig, -1e-6);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Wigner grid as a long-format (x, p, W) table.
inline CsvTable wigner_table(const WignerGrid& w) {
    CsvTable t({"x", "p", "W"});
    for (std::size_t i = 0; i < w.x.size(); ++i)
        for (std::size_t j = 0; j < w.p.size(); ++j) t.add_row({w.x[i], w.p[j], w.values(Eigen::Index(i), Eigen::Index(j))});
    return t;
}

} // namespace optoamp
