// omcav_cli.cpp — Command-line front end: run, sweep, validate.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime or numerical error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "omcav/config.hpp"
#include "omcav/runner.hpp"
#include "omcav/version.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw omcav::io_error("cannot read config file " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

omcav::RunConfig load_config(const std::string& path, int workers, const std::string& out_dir) {
    omcav::RunConfig cfg = omcav::parse_run_config(read_file(path));
    if (workers > 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void print_report(const omcav::RunReport& r) {
    print_warnings(r.warnings);
    std::cout << "n_max: " << r.n_max << "\n";
    std::cout << "max norm drift: " << r.max_norm_drift << "\n";
    std::cout << "series: " << r.series_path << "\n";
    for (const auto& g : r.grid_paths) std::cout << "grid: " << g << "\n";
    if (!r.collapse.empty()) {
        std::cout << "collapse windows (svne_atom within 5% of the maximal level):\n";
        for (const auto& w : r.collapse)
            std::cout << "  [" << w.tau_start << ", " << w.tau_end << "]  width " << w.width()
                      << "\n";
        std::cout << "longest collapse window: " << r.longest_collapse << "\n";
    }
    if (r.squeezing_fraction_entropic)
        std::cout << "entropic squeezing fraction (theta = 0): " << *r.squeezing_fraction_entropic
                  << "\n";
    if (r.squeezing_fraction_quadrature)
        std::cout << "quadrature squeezing fraction (theta = 0): "
                  << *r.squeezing_fraction_quadrature << "\n";
    std::cout << "summary: " << r.summary_path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"omcav: tripartite atom-field-mirror cavity dynamics"};
    app.set_version_flag("--version", std::string(omcav::version));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int workers = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "TOML configuration file")->required();
        cmd->add_option("--workers", workers, "Worker thread budget (default: hardware)");
        cmd->add_option("--out", out_dir, "Output directory (overrides the config)");
    };
    CLI::App* cmd_run = app.add_subcommand("run", "Evolve and write the observable series");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "One run per sweep value plus a matrix file");
    CLI::App* cmd_validate = app.add_subcommand("validate", "Check a config and echo it resolved");
    add_common(cmd_run);
    add_common(cmd_sweep);
    add_common(cmd_validate);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_validate->parsed()) {
            const omcav::RunConfig cfg = load_config(config_path, workers, out_dir);
            print_warnings(cfg.params.validate());
            std::cout << omcav::config_echo(cfg);
            return 0;
        }
        if (cmd_run->parsed()) {
            const omcav::RunConfig cfg = load_config(config_path, workers, out_dir);
            print_report(omcav::run(cfg));
            return 0;
        }
        const omcav::RunConfig cfg = load_config(config_path, workers, out_dir);
        const omcav::SweepReport rep = omcav::sweep(cfg);
        for (std::size_t k = 0; k < rep.runs.size(); ++k) {
            std::cout << "value " << cfg.sweep->values[k] << ": " << rep.runs[k].series_path
                      << "  longest collapse window " << rep.runs[k].longest_collapse << "\n";
        }
        if (!rep.matrix_path.empty())
            std::cout << "matrix (" << rep.matrix_column << "): " << rep.matrix_path << "\n";
        std::cout << "summary: " << rep.summary_path << "\n";
        return 0;
    } catch (const omcav::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
