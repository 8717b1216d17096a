#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxasep {

/// Malformed configuration; `key` names the offending entry.
struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(std::string k, const std::string& message)
        : std::runtime_error(message), key(std::move(k)) {}
};

using ConfigMap = std::map<std::string, std::string>;

/// Flat key-value file: one `key = value` per line, '#' starts a comment.
ConfigMap load_config(const std::string& path);
ConfigMap parse_config(const std::string& text);

double config_double(const ConfigMap& map, const std::string& key, double fallback);
long config_long(const ConfigMap& map, const std::string& key, long fallback);
std::string config_string(const ConfigMap& map, const std::string& key,
                          const std::string& fallback);
std::vector<int> config_int_list(const ConfigMap& map, const std::string& key,
                                 const std::vector<int>& fallback);

}  // namespace coxasep
