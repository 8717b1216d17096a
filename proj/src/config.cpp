#include "coxasep/config.hpp"

#include <fstream>
#include <sstream>

namespace coxasep {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? "" : s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
    ConfigMap map;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "config line " + std::to_string(lineno) +
                                        ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(key, "config line " + std::to_string(lineno) + ": empty key");
        if (!map.emplace(key, value).second)
            throw ConfigError(key, "config: duplicate key '" + key + "'");
    }
    return map;
}

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "config: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

double config_double(const ConfigMap& map, const std::string& key, double fallback) {
    auto it = map.find(key);
    if (it == map.end()) return fallback;
    try {
        size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "config: key '" + key + "' is not a number: '" + it->second + "'");
    }
}

long config_long(const ConfigMap& map, const std::string& key, long fallback) {
    auto it = map.find(key);
    if (it == map.end()) return fallback;
    try {
        size_t used = 0;
        long v = std::stol(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key,
                          "config: key '" + key + "' is not an integer: '" + it->second + "'");
    }
}

std::string config_string(const ConfigMap& map, const std::string& key,
                          const std::string& fallback) {
    auto it = map.find(key);
    return it == map.end() ? fallback : it->second;
}

std::vector<int> config_int_list(const ConfigMap& map, const std::string& key,
                                 const std::vector<int>& fallback) {
    auto it = map.find(key);
    if (it == map.end()) return fallback;
    std::vector<int> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(trim(item)));
        } catch (const std::exception&) {
            throw ConfigError(key, "config: key '" + key + "' has a non-integer entry: '" +
                                       item + "'");
        }
    }
    if (out.empty())
        throw ConfigError(key, "config: key '" + key + "' must be a comma-separated list");
    return out;
}

}  // namespace coxasep
