#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlfem {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration. `#` starts a comment; lists are comma separated.
/// Keys outside the known set are rejected at parse time.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<long> get_ints(const std::string& key) const;

    static const std::vector<std::string>& known_keys();

private:
    std::map<std::string, std::string> values_;
};

}  // namespace nlfem
