#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cli {
namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

bool representable(Axis a, double v) {
    if (!std::isfinite(v)) return false;
    if (a == Axis::log) return v > 0;
    if (a == Axis::log_complement) return v < 1;
    return true;
}

double forward(Axis a, double v) {
    switch (a) {
        case Axis::log: return std::log10(v);
        case Axis::log_complement: return -std::log10(1.0 - v);
        case Axis::linear: break;
    }
    return v;
}

double inverse(Axis a, double w) {
    switch (a) {
        case Axis::log: return std::pow(10.0, w);
        case Axis::log_complement: return 1.0 - std::pow(10.0, -w);
        case Axis::linear: break;
    }
    return w;
}

std::string num(double v, const char* fmt = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double w) {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    void pad() {
        if (!std::isfinite(lo)) lo = 0, hi = 1;
        if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
        const double m = 0.04 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

}  // namespace

std::string render_svg(const Plot& p) {
    Range rx, ry;
    for (const auto& s : p.series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            if (representable(p.xaxis, s.x[i]) && representable(p.yaxis, s.y[i])) {
                rx.add(forward(p.xaxis, s.x[i]));
                ry.add(forward(p.yaxis, s.y[i]));
            }
    rx.pad();
    ry.pad();

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double w) { return kLeft + (w - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto py = [&](double w) { return kTop + (ry.hi - w) / (ry.hi - ry.lo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(p.title) << "</text>\n";
    o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i < kTicks; ++i) {
        const double f = static_cast<double>(i) / (kTicks - 1);
        const double wx = rx.lo + f * (rx.hi - rx.lo), wy = ry.lo + f * (ry.hi - ry.lo);
        const double X = px(wx), Y = py(wy);
        const char* xf = p.xaxis == Axis::log_complement ? "%.5g" : "%.3g";
        o << "<line x1=\"" << num(X) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(X)
          << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(X) << "\" y=\"" << num(kTop + ph + 18)
          << "\" text-anchor=\"middle\">" << num(inverse(p.xaxis, wx), xf) << "</text>\n";
        o << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(Y) << "\" x2=\"" << num(kLeft)
          << "\" y2=\"" << num(Y) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(Y + 4)
          << "\" text-anchor=\"end\">" << num(inverse(p.yaxis, wy), "%.3g") << "</text>\n";
    }
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16)
      << "\" text-anchor=\"middle\">" << escape(p.xlabel) << "</text>\n";
    o << "<text transform=\"translate(18," << num(kTop + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(p.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const Series& s = p.series[k];
        std::string pts;
        std::ostringstream marks;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!representable(p.xaxis, s.x[i]) || !representable(p.yaxis, s.y[i])) continue;
            const double X = px(forward(p.xaxis, s.x[i])), Y = py(forward(p.yaxis, s.y[i]));
            pts += num(X) + "," + num(Y) + " ";
            if (s.markers)
                marks << "<circle cx=\"" << num(X) << "\" cy=\"" << num(Y) << "\" r=\"3\" fill=\""
                      << s.color << "\"/>\n";
        }
        if (!pts.empty()) pts.pop_back();
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
          << pts << "\"/>\n"
          << marks.str();
        const double ly = kTop + 16 + 16 * static_cast<double>(k);
        o << "<line x1=\"" << num(kLeft + pw - 140) << "\" y1=\"" << num(ly) << "\" x2=\""
          << num(kLeft + pw - 116) << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color
          << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << num(kLeft + pw - 110) << "\" y=\"" << num(ly + 4) << "\">"
          << escape(s.name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace cli
