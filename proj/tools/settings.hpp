// Experiment settings: flag values merged with an optional flat key=value config file.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Thrown for anything the user must fix in flags or config; maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::optional<double> alpha;
    double scale = 1.0;
    std::string family = "gumbel";
    double phi = 1.0;
    double sigma = 0.5;

    std::vector<double> t;  // explicit abscissae (t for tailprob, q for var)
    std::vector<double> q;
    std::optional<double> grid_min;
    std::optional<double> grid_max;
    int grid_count = 20;

    std::uint64_t n = 0;
    std::optional<std::uint64_t> seed;
    bool no_mc = false;

    std::string csv;
    std::string svg;
    std::string out_dir = ".";
    std::string samples;
    std::string boundary = "combine";

    std::vector<double> levels;  // log10 t for the checker
    double tolerance = 1e-3;
};

using ConfigMap = std::map<std::string, std::string>;

ConfigMap read_config(const std::string& path);

// Keys understood in config files, each paired with the flag that overrides it.
const std::map<std::string, std::string>& config_keys();

// Applies `value` for `key` to `s`; throws ConfigError on unknown keys or bad values.
void apply_config_value(Settings& s, const std::string& key, const std::string& value);

double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_count(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);

std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace cli
