// Command-line front end: runs the verification suites from a JSON config
// and writes one CSV per suite plus a JSON summary.
//
// Exit codes: 0 all checks passed, 1 at least one check failed,
// 2 usage or configuration error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "morsem/parallel.hpp"
#include "morsem/report.hpp"

namespace {

int run(const std::string& suite, const std::string& config_path, const std::string& out_dir,
        int threads) {
    morsem::SuiteConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config file '" << config_path << "'\n";
            return 2;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = morsem::parse_config(buf.str());
    } else {
        cfg = morsem::default_config(suite);
    }
    if (threads > 0) cfg.threads = threads;

    std::vector<morsem::SuiteResult> results = morsem::run_suite(suite, cfg);
    morsem::write_reports(results, out_dir);

    bool all_pass = true;
    for (const morsem::SuiteResult& sr : results) {
        for (const morsem::ReportRow& row : sr.rows) {
            std::cout << (row.pass ? "[PASS] " : "[FAIL] ") << sr.suite << "/" << row.check
                      << "  measured=" << row.measured << "  predicted=" << row.predicted
                      << "\n";
            all_pass = all_pass && row.pass;
        }
        std::cout << sr.suite << ": " << (sr.pass() ? "pass" : "FAIL") << " ("
                  << static_cast<int>(sr.seconds * 1000.0) / 1000.0 << " s)\n";
    }
    std::cout << "reports written to " << out_dir << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"morsem: Morrey-space semigroup estimate verification on model manifolds"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "reports";
    int threads = 0;
    bool seed_flag = false;

    std::vector<std::string> suites = morsem::suite_names();
    suites.push_back("report-all");
    std::vector<CLI::App*> subs;
    for (const std::string& name : suites) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " suite");
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory for CSV/JSON reports");
        sub->add_option("--threads", threads, "worker thread cap");
        sub->add_flag("--seed-irrelevant", seed_flag,
                      "reserved; no randomness is used anywhere");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (seed_flag) {
        std::cerr << "error: --seed-irrelevant is reserved (the toolkit uses no randomness)\n";
        return 2;
    }

    std::string chosen;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) chosen = suites[i];

    try {
        return run(chosen, config_path, out_dir, threads);
    } catch (const morsem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
