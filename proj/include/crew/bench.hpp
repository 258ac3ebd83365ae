// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo sweep runner and report writer.
//
// Output files (emit_report):
//   results.csv             algorithm,N,trial,seed,mse,iters,wall_ms
//   summary.json            per (algorithm, N) mean / stderr / count
//   plotdata_<name>.csv     N,<alg>_mean,<alg>_stderr,...
//   timings.csv             algorithm,N,trial,wall_ms (not reproducible)

#pragma once

#include "crew/config.hpp"
#include "crew/design.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace crew {

struct ResultRow {
    std::string algorithm;
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double mse = 0.0;  ///< NaN for error rows
    int iterations = 0;
    bool converged = false;
    double wall_ms = 0.0;
    std::optional<std::string> error;
};

struct Aggregate {
    std::string algorithm;
    int n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    int count = 0;   ///< successful trials
    int errors = 0;  ///< failed trials
};

struct ResultsTable {
    std::string name;
    std::vector<ResultRow> rows;        ///< sorted by (algorithm, N, trial)
    std::vector<Aggregate> aggregates;  ///< sorted by (algorithm, N)
    bool record_wall_time = false;
    bool emit_plot_data = true;

    int error_count() const;
};

/// Stable per-cell seed; independent of which other algorithms or lengths run.
std::uint64_t cell_seed(std::uint64_t base, const std::string& algorithm, int n, int trial);

/// Mean and standard error (sample sd / sqrt(count)) per (algorithm, N),
/// skipping error rows.
std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows);

/// Runs every (algorithm, N, trial) cell on up to `jobs` threads. Cells that
/// throw become error rows. Throws Error only if every cell failed.
ResultsTable run_sweep(const SweepConfig& config, int jobs = 1);

/// Writes the report files into `dir` (created if needed). All files are
/// opened before anything is written; IoError on failure.
void emit_report(const ResultsTable& table, const std::filesystem::path& dir);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Parses a results.csv written by emit_report.
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

}  // namespace crew
