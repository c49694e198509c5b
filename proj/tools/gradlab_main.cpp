#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gradlab/harness.hpp"

namespace {

int run_kind(const std::string& kind, const std::string& config_path, std::string out_path,
             int jobs, std::uint64_t seed, bool seed_set, bool jobs_set, bool timing) {
    gradlab::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = gradlab::load_config(config_path);
    cfg.kind = kind;
    if (seed_set)
        cfg.seed = seed;
    else if (cfg.seed == 0)
        cfg.seed = 1;
    if (jobs_set) cfg.jobs = jobs;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (cfg.out_path.empty()) cfg.out_path = "results.csv";

    const std::vector<gradlab::ResultRow> rows = gradlab::run(cfg);

    std::ofstream csv(cfg.out_path);
    if (!csv) {
        std::cerr << "error: cannot write " << cfg.out_path << "\n";
        return 2;
    }
    gradlab::write_csv(rows, csv, timing);
    std::ofstream dat(cfg.out_path + ".dat");
    gradlab::write_plot_data(rows, dat);

    std::cout << gradlab::report(rows);
    return gradlab::all_pass(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradlab: audits and sweeps for metric-independent gradient estimates"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int jobs = 1;
    std::uint64_t seed = 1;
    bool timing = false;
    app.add_option("--config", config_path, "experiment config file (sectioned key = value)");
    app.add_option("--out", out_path, "CSV output path (default results.csv)");
    auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
    auto* seed_opt = app.add_option("--seed", seed, "seed for random sample generation");
    app.add_flag("--timing", timing, "record wall time in the ms column (breaks byte-for-byte "
                                     "reproducibility of the CSV)");

    for (const char* name : {"potential", "disk-area", "blowup", "torus", "collar", "annulus",
                             "all"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);

    const std::string kind = app.get_subcommands().front()->get_name();
    try {
        return run_kind(kind, config_path, out_path, jobs, seed, seed_opt->count() > 0,
                        jobs_opt->count() > 0, timing);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
