// Command-line front end: one job per invocation, configured by a single
// file, deterministic outputs. Exit codes: 0 pass, 1 assertion failure,
// 2 config error, 3 I/O failure.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cliffspec/jobs.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cliffspec: S-spectrum with boundary conditions on finite Clifford modules"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;

    const std::vector<std::pair<std::string, std::string>> tasks = {
        {"scan", "chart sigma_min over a slice half-plane grid and emit CSV"},
        {"verify", "run the operator-identity residual suite at the configured points"},
        {"series", "expand the pseudo-resolvent around a center and tabulate convergence"},
        {"kernel", "compare the commutator kernel with its image characterization"},
    };
    for (const auto& [name, desc] : tasks) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "job configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", threads, "worker threads for grid scans");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        cliffspec::JobConfig cfg = cliffspec::load_job_config(config_path);
        cfg.task = app.get_subcommands().front()->get_name();
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (threads > 0) cfg.threads = threads;
        return cliffspec::run_job(cfg);
    } catch (const cliffspec::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cliffspec::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cliffspec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
