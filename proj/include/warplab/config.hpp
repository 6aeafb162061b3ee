#pragma once
// Flat sectioned experiment configs:
//
//   [experiment]
//   name = gap
//   [params]
//   c = 2/3
//   R_list = 2, 3, 4, 6, 8
//
// Numeric values are constant expressions; lists are comma-separated.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "warplab/errors.hpp"
#include "warplab/expression.hpp"

namespace warplab {

inline constexpr std::array<std::string_view, 8> kConfigSections = {
    "experiment", "metric", "profile", "field", "grid", "boundary", "params", "tolerances"};

struct Config {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const {
        const auto it = sections.find(section);
        return it != sections.end() && it->second.count(key) != 0;
    }
    bool operator==(const Config&) const = default;
};

inline std::string trim(std::string_view s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

// Collapses interior whitespace runs to one space so equivalent spellings
// normalize identically.
inline std::string collapse_spaces(std::string_view s) {
    std::string out;
    bool gap = false;
    for (char c : trim(s)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            gap = true;
            continue;
        }
        if (gap) out += ' ';
        gap = false;
        out += c;
    }
    return out;
}

inline Config parse_config(std::string_view text) {
    Config cfg;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where, "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (std::find(kConfigSections.begin(), kConfigSections.end(), section) ==
                kConfigSections.end())
                throw ConfigError("[" + section + "]", "unknown section");
            cfg.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
        if (section.empty()) throw ConfigError(where, "key outside any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = collapse_spaces(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(where, "empty key");
        auto& table = cfg.sections[section];
        if (table.count(key)) throw ConfigError(section + "." + key, "duplicate key");
        table.emplace(key, value);
    }
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// Canonical text: sections in fixed order, keys sorted.
inline std::string serialize_config(const Config& cfg) {
    std::ostringstream os;
    bool first = true;
    for (auto name : kConfigSections) {
        const auto it = cfg.sections.find(std::string(name));
        if (it == cfg.sections.end()) continue;
        if (!first) os << '\n';
        first = false;
        os << '[' << name << "]\n";
        for (const auto& [k, v] : it->second) os << k << " = " << v << '\n';
    }
    return os.str();
}

// Typed access that remembers which keys were read; anything left over is
// an unknown key for the experiment at hand.
class ConfigReader {
public:
    explicit ConfigReader(const Config& cfg) : cfg_(cfg) {}

    bool has(const std::string& section, const std::string& key) const {
        return cfg_.has(section, key);
    }

    std::string text(const std::string& section, const std::string& key) {
        const auto* v = find(section, key);
        if (!v) throw ConfigError(section + "." + key, "required key missing");
        return *v;
    }
    std::string text(const std::string& section, const std::string& key, std::string fallback) {
        const auto* v = find(section, key);
        return v ? *v : fallback;
    }

    double number(const std::string& section, const std::string& key) {
        return to_number(section, key, text(section, key));
    }
    double number(const std::string& section, const std::string& key, double fallback) {
        const auto* v = find(section, key);
        return v ? to_number(section, key, *v) : fallback;
    }

    int integer(const std::string& section, const std::string& key, int fallback) {
        const auto* v = find(section, key);
        if (!v) return fallback;
        const double d = to_number(section, key, *v);
        if (d != std::floor(d) || std::fabs(d) > 1e9)
            throw ConfigError(section + "." + key, "expected an integer, got '" + *v + "'");
        return static_cast<int>(d);
    }

    bool flag(const std::string& section, const std::string& key, bool fallback) {
        const auto* v = find(section, key);
        if (!v) return fallback;
        if (*v == "true" || *v == "yes" || *v == "1") return true;
        if (*v == "false" || *v == "no" || *v == "0") return false;
        throw ConfigError(section + "." + key, "expected true or false, got '" + *v + "'");
    }

    std::vector<double> numbers(const std::string& section, const std::string& key) {
        const std::string v = text(section, key);
        std::vector<double> out;
        std::size_t start = 0;
        while (true) {
            const auto comma = v.find(',', start);
            const std::string item = trim(std::string_view(v).substr(
                start, comma == std::string::npos ? std::string::npos : comma - start));
            if (item.empty()) throw ConfigError(section + "." + key, "empty list item");
            out.push_back(to_number(section, key, item));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }
    std::vector<double> numbers(const std::string& section, const std::string& key,
                                std::vector<double> fallback) {
        return has(section, key) ? numbers(section, key) : fallback;
    }

    void reject_unused() const {
        for (const auto& [section, table] : cfg_.sections)
            for (const auto& kv : table)
                if (!used_.count({section, kv.first}))
                    throw ConfigError(section + "." + kv.first, "unknown key for this experiment");
    }

private:
    const std::string* find(const std::string& section, const std::string& key) {
        const auto it = cfg_.sections.find(section);
        if (it == cfg_.sections.end()) return nullptr;
        const auto kv = it->second.find(key);
        if (kv == it->second.end()) return nullptr;
        used_.insert({section, key});
        return &kv->second;
    }

    static double to_number(const std::string& section, const std::string& key,
                            const std::string& v) {
        try {
            const double d = evaluate_constant(v);
            if (!std::isfinite(d)) throw ConfigError(section + "." + key, "value is not finite");
            return d;
        } catch (const ExpressionError& e) {
            throw ConfigError(section + "." + key, e.what());
        }
    }

    const Config& cfg_;
    std::set<std::pair<std::string, std::string>> used_;
};

}  // namespace warplab
