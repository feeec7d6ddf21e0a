// config.hpp — flat key/value configuration with [sections], typed reads and unknown-key detection
//
//   schema = 1
//   scenario = "fig3_g2_sweep"
//   [model]
//   g = [0.1, 0.05]      # arrays in brackets
//   dims = [3, 3, 8]
//
// Keys inside a section are addressed as "section.key". Every key present in the file must be
// read by the scenario that consumes it, otherwise check_all_used() reports it as unknown.

#pragma once

#include "json.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "optoamp/errors.hpp"

namespace optoamp {

inline constexpr int config_schema_version = 1;

class Config {
public:
    static Config parse(std::string_view text, std::string origin = "<string>") {
        Config c;
        c.origin_ = std::move(origin);
        std::string section;
        std::istringstream in{std::string(text)};
        std::string line;
        for (int lineno = 1; std::getline(in, line); ++lineno) {
            line = strip(strip_comment(line));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') c.fail(lineno, "unterminated section header");
                section = strip(line.substr(1, line.size() - 2));
                if (section.empty() || !valid_key(section)) c.fail(lineno, "invalid section name");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) c.fail(lineno, "expected 'key = value'");
            const std::string key = strip(line.substr(0, eq));
            const std::string val = strip(line.substr(eq + 1));
            if (!valid_key(key)) c.fail(lineno, "invalid key '" + key + "'");
            if (val.empty()) c.fail(lineno, "missing value for '" + key + "'");
            const std::string full = section.empty() ? key : section + "." + key;
            if (c.values_.count(full)) c.fail(lineno, "duplicate key '" + full + "'");
            c.values_[full] = val;
        }
        return c;
    }

    static Config load(const std::filesystem::path& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file '" + path.string() + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), path.string());
    }

    // "section.key=value" as given on the command line.
    void apply_override(std::string_view kv) {
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(kv) + "' is not key=value");
        const std::string key = strip(std::string(kv.substr(0, eq)));
        const std::string val = strip(std::string(kv.substr(eq + 1)));
        if (key.empty() || val.empty()) throw ConfigError("override '" + std::string(kv) + "' is incomplete");
        for (std::size_t p = 0, q; p <= key.size(); p = q + 1) {
            q = key.find('.', p);
            if (q == std::string::npos) q = key.size();
            if (!valid_key(key.substr(p, q - p))) throw ConfigError("override key '" + key + "' is malformed");
        }
        values_[key] = val;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& origin() const { return origin_; }

    double get_double(const std::string& key, double def) const {
        const auto v = lookup(key);
        if (!v) return record(key, def);
        return record(key, to_double(key, *v));
    }

    long get_int(const std::string& key, long def) const {
        const auto v = lookup(key);
        if (!v) return record(key, def);
        const double d = to_double(key, *v);
        if (d != std::floor(d)) throw ConfigError("config key '" + key + "' must be an integer");
        return record(key, static_cast<long>(d));
    }

    std::size_t get_size(const std::string& key, std::size_t def) const {
        const long v = get_int(key, static_cast<long>(def));
        if (v < 0) throw ConfigError("config key '" + key + "' must be non-negative");
        return static_cast<std::size_t>(v);
    }

    bool get_bool(const std::string& key, bool def) const {
        const auto v = lookup(key);
        if (!v) return record(key, def);
        if (*v == "true") return record(key, true);
        if (*v == "false") return record(key, false);
        throw ConfigError("config key '" + key + "' must be true or false");
    }

    std::string get_string(const std::string& key, const std::string& def) const {
        const auto v = lookup(key);
        if (!v) return record(key, def);
        return record(key, unquote(key, *v));
    }

    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def) const {
        const auto v = lookup(key);
        if (!v) return record(key, def);
        std::vector<double> out;
        for (const auto& item : split_array(key, *v)) out.push_back(to_double(key, item));
        if (out.empty()) throw ConfigError("config key '" + key + "' must be a nonempty list");
        return record(key, out);
    }

    std::vector<std::size_t> get_sizes(const std::string& key, const std::vector<std::size_t>& def) const {
        const auto v = lookup(key);
        if (!v) return record(key, def);
        std::vector<std::size_t> out;
        for (const auto& item : split_array(key, *v)) {
            const double d = to_double(key, item);
            if (d < 0 || d != std::floor(d)) throw ConfigError("config key '" + key + "' must list non-negative integers");
            out.push_back(static_cast<std::size_t>(d));
        }
        if (out.empty()) throw ConfigError("config key '" + key + "' must be a nonempty list");
        return record(key, out);
    }

    // Throws for keys that were never read (typos, keys from another scenario).
    void check_all_used() const {
        std::vector<std::string> unknown;
        for (const auto& [k, v] : values_)
            if (!resolved_.contains(k)) unknown.push_back(k);
        if (!unknown.empty()) {
            std::string msg = "unknown config key(s) in " + origin_ + ":";
            for (const auto& k : unknown) msg += " " + k;
            throw ConfigError(msg);
        }
    }

    // Every key read so far with its resolved value (defaults included).
    const nlohmann::json& resolved() const { return resolved_; }

private:
    static std::string strip(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    static std::string strip_comment(const std::string& s) {
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') quoted = !quoted;
            if (s[i] == '#' && !quoted) return s.substr(0, i);
        }
        return s;
    }

    static bool valid_key(const std::string& k) {
        if (k.empty()) return false;
        for (char ch : k)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
        return true;
    }

    [[noreturn]] void fail(int lineno, const std::string& what) const {
        throw ConfigError(origin_ + ":" + std::to_string(lineno) + ": " + what);
    }

    const std::string* lookup(const std::string& key) const {
        const auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    template <class T>
    T record(const std::string& key, T v) const {
        resolved_[key] = v;
        return v;
    }

    static double to_double(const std::string& key, const std::string& s) {
        double v = 0.0;
        const auto* b = s.data();
        const auto* e = s.data() + s.size();
        const auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e || !std::isfinite(v))
            throw ConfigError("config key '" + key + "': '" + s + "' is not a finite number");
        return v;
    }

    static std::string unquote(const std::string& key, const std::string& s) {
        if (s.size() < 2 || s.front() != '"' || s.back() != '"')
            throw ConfigError("config key '" + key + "' must be a quoted string");
        return s.substr(1, s.size() - 2);
    }

    static std::vector<std::string> split_array(const std::string& key, const std::string& s) {
        if (s.size() < 2 || s.front() != '[' || s.back() != ']')
            throw ConfigError("config key '" + key + "' must be a [list]");
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s.substr(1, s.size() - 2)) {
            if (ch == ',') {
                out.push_back(strip(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!strip(cur).empty()) out.push_back(strip(cur));
        for (const auto& item : out)
            if (item.empty()) throw ConfigError("config key '" + key + "' has an empty list element");
        return out;
    }

    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable nlohmann::json resolved_ = nlohmann::json::object();
};

} // namespace optoamp
