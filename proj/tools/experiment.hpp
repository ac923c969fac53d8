// Expansion-vs-simulation tables built on the C API.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "settings.hpp"
#include "svg.hpp"
#include "tailsum/tailsum.h"

namespace cli {

// A failed C API call, carrying the exit code it maps to.
struct ApiError : std::runtime_error {
    ApiError(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
    int exit_code;
};

void check(ts_status st, const std::string& context);

struct ModelDeleter {
    void operator()(ts_model* m) const { ts_model_destroy(m); }
};
struct SampleDeleter {
    void operator()(ts_sample* s) const { ts_sample_destroy(s); }
};
struct ReportDeleter {
    void operator()(ts_check_report* r) const { ts_check_report_destroy(r); }
};
using ModelPtr = std::unique_ptr<ts_model, ModelDeleter>;
using SamplePtr = std::unique_ptr<ts_sample, SampleDeleter>;
using ReportPtr = std::unique_ptr<ts_check_report, ReportDeleter>;

ModelPtr make_model(const Settings& s);
SamplePtr simulate(const ts_model* m, const Settings& s);

struct Row {
    double abscissa = 0;
    double first_order = 0;
    double expansion = 0;
    bool has_mc = false;
    double mc_point = 0;
    double mc_stderr = 0;
    std::string case_label;
    std::string diagnostics;
};

enum class Mode { tailprob, var };

std::vector<double> tailprob_grid(const ts_model* m, const Settings& s);
std::vector<double> var_grid(const Settings& s);

std::vector<Row> tailprob_table(const ts_model* m, const std::vector<double>& grid,
                                const ts_sample* sample);
std::vector<Row> var_table(const ts_model* m, const std::vector<double>& grid, ts_sample* sample,
                           ts_boundary_policy policy);

std::string to_csv(const std::vector<Row>& rows);
Plot make_plot(Mode mode, const std::vector<Row>& rows, const std::string& title);

// Writes `content` to `path`; failures raise ApiError with the I/O exit code.
void write_file(const std::string& path, const std::string& content);

ts_boundary_policy parse_policy(const std::string& name);

}  // namespace cli
