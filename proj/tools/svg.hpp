// Minimal standalone SVG line plots.
#pragma once

#include <string>
#include <vector>

namespace cli {

enum class Axis { linear, log, log_complement };  // log_complement plots q on a log(1-q) scale

struct Series {
    std::string name;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;
};

struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    Axis xaxis = Axis::linear;
    Axis yaxis = Axis::linear;
    std::vector<Series> series;
};

std::string render_svg(const Plot& plot);

}  // namespace cli
