#ifndef TANHFLOW_HARNESS_HPP
#define TANHFLOW_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "tanhflow/evolution.hpp"
#include "tanhflow/oracle.hpp"

namespace tanhflow {

// Declarative run configuration (parsed from JSON).
struct RunConfig {
    int schema_version = 1;
    std::vector<int> alpha_list{2};
    SolveParams solve;
    double t_table_max = 100.0;      // largest alpha*t the tables must resolve
    std::string initial_family = "gaussian";
    std::string initial_file;        // CSV (y, re, im); overrides the family
    std::vector<double> times{1.0, 5.0, 10.0};
    double evolve_L = 20.0;          // direct-oracle half-width
    double evolve_h = 0.02;
    double evolve_dt = 0.0;          // <= 0: 0.5/alpha
    std::string out_dir = ".";
    unsigned long long seed = 1;
    bool run_verify = false;
    bool run_evolve = true;
    bool run_wronskian = true;
    std::vector<double> decay_window{10.0, 100.0};
};

// Parses and validates; throws std::runtime_error naming the offending field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

struct DecayFit {
    std::string quantity;
    double t_lo = 0.0, t_hi = 0.0;
    double exponent = 0.0;
    double residual = 0.0;    // RMS of log-residuals
    double half_width = 0.0;  // 1.96 * standard error of the slope
    int n = 0;
};

// Least-squares slope of log(value) vs log(t) over the window.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   double t_lo, double t_hi, const std::string& quantity = "");

struct FieldComparison {
    double t = 0.0;
    double rel_l2 = 0.0;
    double rel_linf = 0.0;
    double rel_h1 = 0.0;
};

// Relative discrepancies between two fields on a common grid.
FieldComparison compare_fields(const Grid& grid, double t,
                               const std::vector<cplx>& a,
                               const std::vector<cplx>& b);

// Executes the configured suites, writes CSV/JSON artifacts under out_dir,
// and returns the process exit status (0 iff all declared checks passed).
int run_config(const RunConfig& cfg);

}  // namespace tanhflow

#endif
