// tailsum: expansion-vs-simulation experiments, assumption checks and figure reproduction.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "experiment.hpp"
#include "settings.hpp"

using namespace cli;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 4;

struct Command {
    CLI::App* app = nullptr;
    std::set<std::string> keys;
    std::map<std::string, std::string> raw;  // flag text by config key
    std::string config;
    bool no_mc = false;
    std::string samples;
};

const std::map<std::string, std::string> kHelp = {
    {"marginal.alpha", "Pareto tail index"},
    {"marginal.scale", "Pareto scale"},
    {"copula.family", "independence | gumbel | comonotone | barnett"},
    {"copula.phi", "Gumbel parameter (>= 1)"},
    {"copula.sigma", "Barnett parameter in (0, 1]"},
    {"mc.n", "Monte Carlo sample size (>= 1000)"},
    {"mc.seed", "Monte Carlo seed (required for simulation)"},
    {"grid.t", "comma-separated thresholds t"},
    {"grid.q", "comma-separated levels q"},
    {"grid.min", "lower end of a log-spaced grid"},
    {"grid.max", "upper end of a log-spaced grid"},
    {"grid.count", "points in a generated grid"},
    {"out.csv", "CSV output path (default: stdout)"},
    {"out.svg", "SVG output path"},
    {"out.dir", "output directory"},
    {"check.tolerance", "relative tolerance for the final level"},
    {"check.levels", "comma-separated log10 t levels, decreasing"},
    {"var.boundary", "combine | strict, at a second-order exponent tie"},
};

void add_keys(Command& c, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        c.keys.insert(k);
        c.app->add_option(config_keys().at(k), c.raw[k], kHelp.at(k));
    }
    c.app->add_option("--config", c.config, "flat key=value file; flags take precedence");
}

Settings resolve(const Command& c) {
    Settings s;
    ConfigMap file;
    if (!c.config.empty()) file = read_config(c.config);
    for (const auto& key : c.keys) {
        if (c.app->count(config_keys().at(key)) > 0) apply_config_value(s, key, c.raw.at(key));
        else if (auto it = file.find(key); it != file.end()) apply_config_value(s, key, it->second);
    }
    s.no_mc = c.no_mc;
    s.samples = c.samples;
    return s;
}

void emit(Mode mode, const Settings& s, const std::vector<Row>& rows, const std::string& title) {
    if (s.csv.empty()) std::cout << to_csv(rows);
    else write_file(s.csv, to_csv(rows));
    if (!s.svg.empty()) write_file(s.svg, render_svg(make_plot(mode, rows, title)));
}

std::string describe(const Settings& s) {
    char buf[160];
    if (s.family == "gumbel")
        std::snprintf(buf, sizeof buf, "gumbel phi=%g, alpha=%g", s.phi, *s.alpha);
    else if (s.family == "barnett")
        std::snprintf(buf, sizeof buf, "barnett sigma=%g, alpha=%g", s.sigma, *s.alpha);
    else
        std::snprintf(buf, sizeof buf, "%s, alpha=%g", s.family.c_str(), *s.alpha);
    return buf;
}

int run_tailprob(const Settings& s) {
    ModelPtr m = make_model(s);
    const auto grid = tailprob_grid(m.get(), s);
    SamplePtr sample;
    if (!s.no_mc) sample = simulate(m.get(), s);
    if (!s.samples.empty())
        check(ts_write_pairs_csv(m.get(), s.n, s.seed.value_or(0), s.samples.c_str()), "samples");
    emit(Mode::tailprob, s, tailprob_table(m.get(), grid, sample.get()),
         "Pr(X+Y>t): " + describe(s));
    return 0;
}

int run_var(const Settings& s) {
    const ts_boundary_policy policy = parse_policy(s.boundary);
    ModelPtr m = make_model(s);
    const auto grid = var_grid(s);
    SamplePtr sample;
    if (!s.no_mc) sample = simulate(m.get(), s);
    if (!s.samples.empty())
        check(ts_write_pairs_csv(m.get(), s.n, s.seed.value_or(0), s.samples.c_str()), "samples");
    emit(Mode::var, s, var_table(m.get(), grid, sample.get(), policy), "VaR_q: " + describe(s));
    return 0;
}

const char* verdict_name(ts_verdict v) {
    return v == TS_VERDICT_PASS ? "pass" : v == TS_VERDICT_FAIL ? "FAIL" : "inconclusive";
}

int run_check(Settings s) {
    s.alpha = s.alpha.value_or(1.0);  // marginal plays no part in the copula checks
    ModelPtr m = make_model(s);
    ts_check_report* raw = nullptr;
    check(ts_check_run(m.get(), s.levels.empty() ? nullptr : s.levels.data(), s.levels.size(),
                       s.tolerance, &raw),
          "check");
    ReportPtr rep(raw);

    const std::size_t levels = ts_check_level_count(rep.get());
    std::string csv = "check,verdict,warning,point,target,log10_t,value,deviation\n";
    char buf[512];
    std::printf("assumption checks for %s (tolerance %g)\n", s.family.c_str(), s.tolerance);
    for (std::size_t i = 0; i < ts_check_count(rep.get()); ++i) {
        const char *name, *note;
        ts_verdict v;
        double c, stat, final_dev;
        check(ts_check_info(rep.get(), i, &name, &v, &c, &stat, &note), "check");
        check(ts_check_max_deviation(rep.get(), i, levels - 1, &final_dev), "check");
        std::printf("  %-14s %-12s final deviation %.3e", name, verdict_name(v), final_dev);
        if (!std::isnan(c)) std::printf("  fitted c %.6g", c);
        if (!std::isnan(stat)) std::printf("  statistic %.6g", stat);
        if (*note) std::printf("  (%s)", note);
        std::printf("\n");

        const int warn = v == TS_VERDICT_INCONCLUSIVE;
        for (std::size_t j = 0; j < ts_check_sequence_count(rep.get(), i); ++j) {
            const char* point;
            double target;
            check(ts_check_sequence(rep.get(), i, j, &point, &target), "check");
            for (std::size_t k = 0; k < levels; ++k) {
                double value, dev;
                if (ts_check_sequence_value(rep.get(), i, j, k, &value, &dev) != TS_OK) break;
                std::snprintf(buf, sizeof buf, "%s,%s,%d,\"%s\",%.17g,%.17g,%.17g,%.17g\n", name,
                              verdict_name(v), warn, point, target, ts_check_level(rep.get(), k),
                              value, dev);
                csv += buf;
            }
        }
    }
    if (!s.csv.empty()) write_file(s.csv, csv);
    const bool failed = ts_check_any_fail(rep.get());
    std::printf("%s\n", failed ? "result: FAIL" : "result: pass");
    return failed ? kExitCheckFailed : 0;
}

int run_figures(Settings s) {
    const ts_boundary_policy policy = parse_policy(s.boundary);
    s.family = "gumbel";
    if (s.n == 0) s.n = 100000;
    char prefix[64];
    if (s.phi == 1.0) std::snprintf(prefix, sizeof prefix, "figure1");
    else if (s.phi == 10.0) std::snprintf(prefix, sizeof prefix, "figure2");
    else std::snprintf(prefix, sizeof prefix, "figure-phi%g", s.phi);

    const std::string dir = s.out_dir.empty() ? "." : s.out_dir;
    const double alphas[] = {0.8, 2.0};
    const char panels[2][2] = {{'a', 'b'}, {'c', 'd'}};
    for (int k = 0; k < 2; ++k) {
        s.alpha = alphas[k];
        ModelPtr m = make_model(s);
        SamplePtr sample = simulate(m.get(), s);
        const auto tp = tailprob_table(m.get(), tailprob_grid(m.get(), s), sample.get());
        const auto vr = var_table(m.get(), var_grid(s), sample.get(), policy);
        const std::string base = dir + "/" + prefix + "-";
        const std::string tpath = base + panels[k][0], vpath = base + panels[k][1];
        write_file(tpath + ".csv", to_csv(tp));
        write_file(tpath + ".svg",
                   render_svg(make_plot(Mode::tailprob, tp, "Pr(X+Y>t): " + describe(s))));
        write_file(vpath + ".csv", to_csv(vr));
        write_file(vpath + ".svg", render_svg(make_plot(Mode::var, vr, "VaR_q: " + describe(s))));
        std::printf("wrote %s.{csv,svg} %s.{csv,svg}\n", tpath.c_str(), vpath.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second-order tail asymptotics for sums of two dependent heavy-tailed risks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ts_version());

    Command tp, var, chk, fig;
    tp.app = app.add_subcommand("tailprob", "Pr(X+Y>t): expansions against Monte Carlo");
    add_keys(tp, {"marginal.alpha", "marginal.scale", "copula.family", "copula.phi", "mc.n",
                  "mc.seed", "grid.t", "grid.min", "grid.max", "grid.count", "out.csv",
                  "out.svg"});
    var.app = app.add_subcommand("var", "VaR_q(X+Y): expansions against Monte Carlo");
    add_keys(var, {"marginal.alpha", "marginal.scale", "copula.family", "copula.phi", "mc.n",
                   "mc.seed", "grid.q", "grid.min", "grid.max", "grid.count", "out.csv",
                   "out.svg", "var.boundary"});
    for (Command* c : {&tp, &var}) {
        c->app->add_flag("--no-mc", c->no_mc, "expansions only, no simulation");
        c->app->add_option("--samples", c->samples, "also dump the simulated (x,y) pairs as CSV");
    }
    chk.app = app.add_subcommand("check", "Numerical check of the copula assumptions");
    add_keys(chk, {"copula.family", "copula.phi", "copula.sigma", "out.csv", "check.tolerance",
                   "check.levels"});
    fig.app = app.add_subcommand("reproduce-figures",
                                 "Tail probability and VaR panels for alpha in {0.8, 2}");
    add_keys(fig, {"copula.phi", "marginal.scale", "mc.n", "mc.seed", "out.dir", "var.boundary"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*tp.app) return run_tailprob(resolve(tp));
        if (*var.app) return run_var(resolve(var));
        if (*chk.app) return run_check(resolve(chk));
        return run_figures(resolve(fig));
    } catch (const ConfigError& e) {
        std::cerr << "tailsum: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ApiError& e) {
        std::cerr << "tailsum: " << e.what() << "\n";
        return e.exit_code;
    }
}
