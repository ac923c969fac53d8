#include "settings.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cli {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw ConfigError(what + ": not a finite number: '" + text + "'");
    return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
    const double v = parse_double(text, what);  // accepts 1e6
    if (v < 0 || v != std::floor(v) || v > 1.8e19)
        throw ConfigError(what + ": not a non-negative integer: '" + text + "'");
    return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

ConfigMap read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    ConfigMap out;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (!config_keys().count(key))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

const std::map<std::string, std::string>& config_keys() {
    static const std::map<std::string, std::string> keys = {
        {"marginal.alpha", "--alpha"}, {"marginal.scale", "--scale"},
        {"copula.family", "--family"}, {"copula.phi", "--phi"},
        {"copula.sigma", "--sigma"},   {"mc.n", "--n"},
        {"mc.seed", "--seed"},         {"grid.t", "--t"},
        {"grid.q", "--q"},             {"grid.min", "--grid-min"},
        {"grid.max", "--grid-max"},    {"grid.count", "--grid-count"},
        {"out.csv", "--csv"},          {"out.svg", "--svg"},
        {"out.dir", "--out-dir"},      {"check.tolerance", "--tolerance"},
        {"check.levels", "--levels"},  {"var.boundary", "--boundary"},
    };
    return keys;
}

void apply_config_value(Settings& s, const std::string& key, const std::string& value) {
    if (key == "marginal.alpha") s.alpha = parse_double(value, key);
    else if (key == "marginal.scale") s.scale = parse_double(value, key);
    else if (key == "copula.family") s.family = value;
    else if (key == "copula.phi") s.phi = parse_double(value, key);
    else if (key == "copula.sigma") s.sigma = parse_double(value, key);
    else if (key == "mc.n") s.n = parse_count(value, key);
    else if (key == "mc.seed") s.seed = parse_count(value, key);
    else if (key == "grid.t") s.t = parse_list(value, key);
    else if (key == "grid.q") s.q = parse_list(value, key);
    else if (key == "grid.min") s.grid_min = parse_double(value, key);
    else if (key == "grid.max") s.grid_max = parse_double(value, key);
    else if (key == "grid.count") s.grid_count = static_cast<int>(parse_count(value, key));
    else if (key == "out.csv") s.csv = value;
    else if (key == "out.svg") s.svg = value;
    else if (key == "out.dir") s.out_dir = value;
    else if (key == "check.tolerance") s.tolerance = parse_double(value, key);
    else if (key == "check.levels") s.levels = parse_list(value, key);
    else if (key == "var.boundary") s.boundary = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (count < 1) throw ConfigError("grid count must be positive");
    if (!(lo > 0 && hi > 0)) throw ConfigError("log-spaced grid needs positive endpoints");
    if (count == 1) return {lo};
    std::vector<double> out(count);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace cli
