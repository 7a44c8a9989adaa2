#pragma once

#include <map>
#include <string>
#include <vector>

#include "morsem/mild.hpp"
#include "morsem/riesz.hpp"

namespace morsem {

/// Configuration error with enough context to print line/field diagnostics.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProfileConfig {
    std::string name = "power_exp";  // power_exp | power | gaussian | plateau
    double l = 1.0;
    double k = 1.0;
    double eta = 1.0;
    double amp = 1.0;
    double height = 1.0;
    double radius = 1.0;

    RadialProfile make() const;
};

struct GridConfig {
    double t_min = 0.01;
    double t_max = 100.0;
    int t_count = 12;
    double R_min = 0.01;
    double R_max = 50.0;
    int R_count = 30;
    double d_max = 10.0;
    int d_count = 21;
    int refine_rounds = 2;
    double quad_rel_tol = 1e-8;
    double sweep_rel_tol = 1e-6;

    std::vector<double> t_grid() const;
    SweepSpec sweep() const;
    QuadSpec quad() const;
    QuadSpec sweep_quad() const;
};

struct MildConfig {
    int time_nodes = 40;
    double horizon = 8.0;
    int radial_nodes = 200;
    double r_max = 30.0;
    double nu = 1.0;
    double tol_factor = 1e-5;  // stop tolerance relative to the seed norm
    int max_iter = 25;
};

struct SuiteConfig {
    ModelManifold manifold = ModelManifold::hyperbolic(3, 1.0);
    double p = 2.0;
    double q = 4.0;
    double lambda = 1.0;
    MorreyVariant variant = MorreyVariant::g;
    double c = 0.125;
    ProfileConfig profile;
    GridConfig grids;
    MildConfig mild;
    std::map<std::string, double> thresholds;
    int threads = 0;  // 0 = leave as-is

    double threshold_or(const std::string& check, double fallback) const;
};

/// Parse and validate a config JSON document; unknown keys are rejected.
SuiteConfig parse_config(const std::string& json_text);
SuiteConfig default_config(const std::string& suite);

struct ReportRow {
    std::string suite;
    std::string check;
    std::string anchor;
    double measured = 0.0;
    double predicted = 0.0;
    double tol = 0.0;
    bool pass = false;
    double seconds = 0.0;    // JSON only; the CSV column is a fixed placeholder
    bool structural = false; // rows counted by the zero-failures gate
};

/// Two-column (t, value) curve for external plotting.
struct Curve {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct SuiteResult {
    std::string suite;
    std::vector<ReportRow> rows;
    std::vector<Curve> curves;
    double seconds = 0.0;

    bool pass() const;
};

/// Fixed registry of anchor strings; every emitted row uses one of these.
const std::vector<std::string>& anchor_registry();

SuiteResult run_verify_volumes(const SuiteConfig& cfg);
SuiteResult run_verify_kernel(const SuiteConfig& cfg);
SuiteResult run_verify_morrey(const SuiteConfig& cfg);
SuiteResult run_verify_dispersive(const SuiteConfig& cfg);
SuiteResult run_verify_smoothing(const SuiteConfig& cfg);
SuiteResult run_verify_riesz(const SuiteConfig& cfg);
SuiteResult run_verify_fixed_point(const SuiteConfig& cfg);
SuiteResult run_solve_mild(const SuiteConfig& cfg);

const std::vector<std::string>& suite_names();  // excluding report-all

/// Dispatch by suite name ("report-all" aggregates everything).
std::vector<SuiteResult> run_suite(const std::string& suite, const SuiteConfig& cfg);

/// CSV body with the fixed column order; byte-identical across reruns.
std::string to_csv(const SuiteResult& result);
/// JSON summary holding timings and the pass verdict.
std::string to_json_summary(const std::vector<SuiteResult>& results,
                            const std::string& started_at);

/// Writes <out_dir>/<suite>.csv per suite plus <out_dir>/summary.json.
void write_reports(const std::vector<SuiteResult>& results, const std::string& out_dir);

}  // namespace morsem
