#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "gradlab/measure.hpp"

namespace gradlab {

/// Flat sectioned key-value experiment description. Unknown keys are
/// rejected up front so configs stay diffable provenance records.
struct ExperimentConfig {
    std::string kind;  // potential | disk-area | blowup | torus | collar | annulus | all
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string out_path;
    std::uint64_t seed = 0;
    int jobs = 1;

    /// Section lookup with default.
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
};

/// Parses the INI-like config file ([section] headers, key = value lines,
/// '#' comments). Values are scalars or comma-separated lists.
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
    double ms = 0.0;
};

/// Validates parameters against operation preconditions, then executes
/// the experiment(s) named by config.kind. Deterministic for a fixed
/// config + seed regardless of the job count.
std::vector<ResultRow> run(const ExperimentConfig& config);

/// Columns: experiment, param.<key>..., value, bound, pass, ms. The ms
/// column is written as 0 unless with_timing is set, so that fixed-seed
/// runs are byte-identical.
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out, bool with_timing = false);

/// Human-readable table plus aggregate PASS/FAIL line.
std::string report(const std::vector<ResultRow>& rows);

/// Gnuplot-compatible data: one indexed block per experiment, first
/// numeric parameter as x, value as y.
void write_plot_data(const std::vector<ResultRow>& rows, std::ostream& out);

bool all_pass(const std::vector<ResultRow>& rows);

/// |integral of I_mu * Laplacian(phi) + integral of phi dmu| / max|phi| for a
/// random Gaussian bump phi, quadrature on an n x n grid over [-L, L]^2.
/// Shared between the `potential` experiment and the acceptance suite.
double weak_solution_residual(const SignedMeasure& mu, std::uint64_t bump_seed, int n = 1024,
                              double L = 3.0);

}  // namespace gradlab
