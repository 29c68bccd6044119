#pragma once
// Flat key = value configuration files with [section] headers -- a
// TOML-compatible subset: strings, numbers, booleans and number arrays,
// '#' comments. Section names may be dotted ([initial.union]).

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace anisoac {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>>;

class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_string(ss.str(), path);
    }

    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>") {
        ConfigFile cfg;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = strip(strip_comment(line));
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad section header");
                section = strip(t.substr(1, t.size() - 2));
                if (section.empty())
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
                cfg.sections_[section];  // record even if empty
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = strip(t.substr(0, eq));
            const std::string val = strip(t.substr(eq + 1));
            if (key.empty() || val.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            cfg.sections_[section][key] =
                parse_value(val, origin + ":" + std::to_string(lineno));
        }
        return cfg;
    }

    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
    bool has(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::vector<std::string> section_names() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : sections_) names.push_back(name);
        return names;
    }

    double number(const std::string& section, const std::string& key, double fallback) const {
        const ConfigValue* v = find(section, key);
        if (!v) return fallback;
        if (const double* d = std::get_if<double>(v)) return *d;
        throw ConfigError("config key [" + section + "] " + key + " must be a number");
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) const {
        const ConfigValue* v = find(section, key);
        if (!v) return fallback;
        if (const bool* b = std::get_if<bool>(v)) return *b;
        throw ConfigError("config key [" + section + "] " + key + " must be a boolean");
    }

    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
        const ConfigValue* v = find(section, key);
        if (!v) return fallback;
        if (const std::string* s = std::get_if<std::string>(v)) return *s;
        throw ConfigError("config key [" + section + "] " + key + " must be a string");
    }

    std::optional<std::vector<double>> numbers(const std::string& section,
                                               const std::string& key) const {
        const ConfigValue* v = find(section, key);
        if (!v) return std::nullopt;
        if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
        if (const double* d = std::get_if<double>(v)) return std::vector<double>{*d};
        throw ConfigError("config key [" + section + "] " + key + " must be a number array");
    }

private:
    const ConfigValue* find(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    static std::string strip_comment(const std::string& s) {
        bool in_string = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') in_string = !in_string;
            if (s[i] == '#' && !in_string) return s.substr(0, i);
        }
        return s;
    }

    static std::string strip(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    static ConfigValue parse_value(const std::string& v, const std::string& where) {
        if (v == "true") return true;
        if (v == "false") return false;
        if (v.front() == '"') {
            if (v.size() < 2 || v.back() != '"')
                throw ConfigError(where + ": unterminated string");
            return v.substr(1, v.size() - 2);
        }
        if (v.front() == '[') {
            if (v.back() != ']') throw ConfigError(where + ": unterminated array");
            std::vector<double> out;
            std::string item;
            std::istringstream in(v.substr(1, v.size() - 2));
            while (std::getline(in, item, ',')) {
                const std::string s = strip(item);
                if (s.empty()) continue;
                out.push_back(parse_number(s, where));
            }
            return out;
        }
        return parse_number(v, where);
    }

    static double parse_number(const std::string& s, const std::string& where) {
        try {
            std::size_t used = 0;
            const double d = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return d;
        } catch (const std::exception&) {
            throw ConfigError(where + ": cannot parse number '" + s + "'");
        }
    }

    std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

}  // namespace anisoac
