#include "nlfem/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlfem {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "inf" || t == "infinity") return INFINITY;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("config: key '" + key + "' expects a number, got '" + t + "'");
    return v;
}

long to_long(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + t + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

const std::vector<std::string>& Config::known_keys() {
    static const std::vector<std::string> keys = {
        // mesh
        "mesh", "a", "b", "n", "m", "gamma", "q", "eta",
        // kernel
        "kernel", "alpha", "delta", "delta_h", "profile", "path",
        // problems
        "f", "solution", "forcing", "lambda", "k2", "weight", "sign", "count", "eps", "tau", "T", "u0", "snapshots",
        // sweeps
        "n_values", "delta_values", "alpha_values", "reference"};
    return keys;
}

void Config::set(const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("config: unknown key '" + key + "'");
    values_[key] = value;
}

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        if (c.has(key)) throw ConfigError("config: key '" + key + "' given twice");
        c.set(key, trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string Config::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const { return to_long(key, get_string(key)); }

long Config::get_int(const std::string& key, long fallback) const { return has(key) ? get_int(key) : fallback; }

std::vector<double> Config::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(get_string(key))) out.push_back(to_double(key, item));
    if (out.empty()) throw ConfigError("config: list '" + key + "' is empty");
    return out;
}

std::vector<long> Config::get_ints(const std::string& key) const {
    std::vector<long> out;
    for (const auto& item : split_list(get_string(key))) out.push_back(to_long(key, item));
    if (out.empty()) throw ConfigError("config: list '" + key + "' is empty");
    return out;
}

}  // namespace nlfem
