#include "experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace cli {

namespace exit_code {
constexpr int config = 2, boundary = 3, io = 5;
}

void check(ts_status st, const std::string& context) {
    if (st == TS_OK) return;
    const int code = st == TS_ERR_BOUNDARY ? exit_code::boundary
                     : st == TS_ERR_IO     ? exit_code::io
                                           : exit_code::config;
    throw ApiError(code, context + ": " + ts_status_name(st) + ": " + ts_last_error());
}

ModelPtr make_model(const Settings& s) {
    if (!s.alpha) throw ConfigError("marginal tail index is required (--alpha or marginal.alpha)");
    ts_family fam;
    check(ts_family_parse(s.family.c_str(), &fam), "copula family");
    const double param = fam == TS_FAMILY_BARNETT ? s.sigma : s.phi;
    ts_model* m = nullptr;
    check(ts_model_create(*s.alpha, s.scale, fam, param, &m), "model");
    return ModelPtr(m);
}

SamplePtr simulate(const ts_model* m, const Settings& s) {
    if (!s.seed) throw ConfigError("--seed is required when Monte Carlo is enabled");
    if (s.n < 1000) throw ConfigError("--n must be at least 1000 when Monte Carlo is enabled");
    ts_sample* out = nullptr;
    check(ts_simulate(m, s.n, *s.seed, &out), "simulation");
    return SamplePtr(out);
}

std::vector<double> tailprob_grid(const ts_model* m, const Settings& s) {
    std::vector<double> g;
    if (!s.t.empty()) {
        g = s.t;
    } else if (s.grid_min || s.grid_max) {
        if (!s.grid_min || !s.grid_max) throw ConfigError("--grid-min and --grid-max go together");
        g = log_spaced(*s.grid_min, *s.grid_max, s.grid_count);
    } else {
        // t at which F̄(t) runs log-evenly from 1e-2 down to 1e-5
        for (double p : log_spaced(1e-2, 1e-5, s.grid_count)) {
            double t;
            check(ts_marginal_survival_quantile(m, p, &t), "grid");
            g.push_back(t);
        }
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

std::vector<double> var_grid(const Settings& s) {
    std::vector<double> g;
    if (!s.q.empty()) {
        g = s.q;
    } else if (s.grid_min || s.grid_max) {
        if (!s.grid_min || !s.grid_max) throw ConfigError("--grid-min and --grid-max go together");
        if (!(*s.grid_min < 1 && *s.grid_max < 1)) throw ConfigError("q grid must lie below 1");
        for (double p : log_spaced(1 - *s.grid_min, 1 - *s.grid_max, s.grid_count))
            g.push_back(1 - p);
    } else {
        g = {0.99, 0.995, 0.999, 0.9995, 0.9999};
    }
    for (double q : g)
        if (!(q > 0.5 && q < 1)) throw ConfigError("q values must lie in (0.5, 1)");
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

namespace {

Row from_expansion(double x, const ts_expansion& e) {
    Row r;
    r.abscissa = x;
    r.first_order = e.first_order;
    r.expansion = e.value;
    r.case_label = e.case_label;
    r.diagnostics = e.diagnostics;
    return r;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<Row> tailprob_table(const ts_model* m, const std::vector<double>& grid,
                                const ts_sample* sample) {
    std::vector<Row> rows;
    for (double t : grid) {
        ts_expansion e;
        check(ts_tailprob_expansion(m, t, &e), "expansion at t=" + fmt(t));
        Row r = from_expansion(t, e);
        if (sample) {
            ts_estimate est;
            check(ts_sample_tailprob(sample, t, &est), "estimate at t=" + fmt(t));
            r.has_mc = true;
            r.mc_point = est.point;
            r.mc_stderr = est.std_error;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Row> var_table(const ts_model* m, const std::vector<double>& grid, ts_sample* sample,
                           ts_boundary_policy policy) {
    std::vector<Row> rows;
    for (double q : grid) {
        ts_expansion e;
        check(ts_var_expansion(m, q, policy, &e), "expansion at q=" + fmt(q));
        Row r = from_expansion(q, e);
        if (sample) {
            ts_estimate est;
            check(ts_sample_var(sample, q, &est), "estimate at q=" + fmt(q));
            r.has_mc = true;
            r.mc_point = est.point;
            r.mc_stderr = est.std_error;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string to_csv(const std::vector<Row>& rows) {
    std::string out = "abscissa,first_order,expansion,mc_point,mc_stderr,case_label,diagnostics\n";
    for (const Row& r : rows) {
        out += fmt(r.abscissa) + ',' + fmt(r.first_order) + ',' + fmt(r.expansion) + ',';
        if (r.has_mc) out += fmt(r.mc_point) + ',' + fmt(r.mc_stderr);
        else out += ',';
        out += ',' + quoted(r.case_label) + ',' + quoted(r.diagnostics) + '\n';
    }
    return out;
}

Plot make_plot(Mode mode, const std::vector<Row>& rows, const std::string& title) {
    Plot p;
    p.title = title;
    if (mode == Mode::tailprob) {
        p.xlabel = "t";
        p.ylabel = "Pr(X+Y > t)";
        p.xaxis = Axis::log;
        p.yaxis = Axis::log;
    } else {
        p.xlabel = "q";
        p.ylabel = "VaR_q(X+Y)";
        p.xaxis = Axis::log_complement;
        p.yaxis = Axis::log;
    }
    Series exp{"expansion", "#1f4e9c", {}, {}, false};
    Series mc{"simulation", "#c0392b", {}, {}, true};
    for (const Row& r : rows) {
        exp.x.push_back(r.abscissa);
        exp.y.push_back(r.expansion);
        if (r.has_mc) {
            mc.x.push_back(r.abscissa);
            mc.y.push_back(r.mc_point);
        }
    }
    p.series.push_back(std::move(exp));
    if (!mc.x.empty()) p.series.push_back(std::move(mc));
    return p;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (out) out << content;
    if (!out || !out.flush()) throw ApiError(exit_code::io, "cannot write '" + path + "'");
}

ts_boundary_policy parse_policy(const std::string& name) {
    if (name == "combine") return TS_BOUNDARY_COMBINE;
    if (name == "strict") return TS_BOUNDARY_STRICT;
    throw ConfigError("boundary policy must be 'combine' or 'strict', got '" + name + "'");
}

}  // namespace cli
