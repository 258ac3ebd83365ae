// SPDX-License-Identifier: Apache-2.0

#include "crew/bench.hpp"

#include "crew/seeds.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace crew {

using nlohmann::json;

int ResultsTable::error_count() const {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.error.has_value(); }));
}

std::uint64_t cell_seed(std::uint64_t base, const std::string& algorithm, int n, int trial) {
    std::uint64_t h = derive_seed(base, fnv1a(algorithm));
    h = derive_seed(h, static_cast<std::uint64_t>(n));
    return derive_seed(h, static_cast<std::uint64_t>(trial));
}

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::string, int>, std::vector<const ResultRow*>> cells;
    for (const auto& r : rows) {
        cells[{r.algorithm, r.n}].push_back(&r);
    }
    std::vector<Aggregate> out;
    for (const auto& [key, members] : cells) {
        Aggregate a;
        a.algorithm = key.first;
        a.n = key.second;
        double sum = 0.0;
        for (const auto* r : members) {
            if (r->error) {
                ++a.errors;
            } else {
                ++a.count;
                sum += r->mse;
            }
        }
        if (a.count == 0) {
            a.mean = std::numeric_limits<double>::quiet_NaN();
            a.stderr_ = std::numeric_limits<double>::quiet_NaN();
        } else {
            a.mean = sum / a.count;
            double ss = 0.0;
            for (const auto* r : members) {
                if (!r->error) {
                    ss += (r->mse - a.mean) * (r->mse - a.mean);
                }
            }
            a.stderr_ = a.count > 1 ? std::sqrt(ss / (a.count - 1)) / std::sqrt(static_cast<double>(a.count)) : 0.0;
        }
        out.push_back(a);
    }
    return out;
}

ResultsTable run_sweep(const SweepConfig& config, int jobs) {
    config.validate();
    struct Cell {
        Algorithm algorithm;
        int n;
        int trial;
    };
    std::vector<Cell> cells;
    for (auto alg : config.algorithms) {
        for (int n : config.lengths) {
            for (int t = 0; t < config.trials; ++t) {
                cells.push_back({alg, n, t});
            }
        }
    }

    std::vector<ResultRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            ResultRow& row = rows[i];
            row.algorithm = to_string(c.algorithm);
            row.n = c.n;
            row.trial = c.trial;
            row.seed = cell_seed(config.base.seed, row.algorithm, c.n, c.trial);
            ScenarioConfig sc = config.base;
            sc.n = c.n;
            sc.seed = row.seed;
            const auto start = std::chrono::steady_clock::now();
            try {
                const DesignOutcome outcome = run_design(c.algorithm, sc);
                row.mse = evaluate_true_mse(outcome, sc);
                row.iterations = outcome.iterations;
                row.converged = outcome.converged;
            } catch (const std::exception& e) {
                row.mse = std::numeric_limits<double>::quiet_NaN();
                row.error = e.what();
            }
            row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
    };

    const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int k = 0; k < threads; ++k) {
            pool.emplace_back(worker);
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.algorithm, a.n, a.trial) < std::tie(b.algorithm, b.n, b.trial);
    });

    ResultsTable table;
    table.name = config.name;
    table.rows = std::move(rows);
    table.aggregates = aggregate(table.rows);
    table.record_wall_time = config.record_wall_time;
    table.emit_plot_data = config.emit_plot_data;
    if (!table.rows.empty() && table.error_count() == static_cast<int>(table.rows.size())) {
        throw Error("sweep: every cell failed; first error: " + *table.rows.front().error);
    }
    return table;
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw IoError("results.csv: bad number '" + s + "'");
    }
    return v;
}

template <class Int>
Int parse_int(const std::string& s) {
    Int v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw IoError("results.csv: bad integer '" + s + "'");
    }
    return v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void emit_report(const ResultsTable& table, const std::filesystem::path& dir) {
    std::ostringstream csv;
    csv << "algorithm,N,trial,seed,mse,iters,wall_ms\n";
    for (const auto& r : table.rows) {
        csv << r.algorithm << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << format_double(r.mse) << ','
            << r.iterations << ',';
        if (table.record_wall_time) {
            csv << format_double(r.wall_ms);
        }
        csv << '\n';
    }

    json summary;
    summary["name"] = table.name;
    summary["aggregates"] = json::object();
    for (const auto& a : table.aggregates) {
        summary["aggregates"][a.algorithm][std::to_string(a.n)] = {
            {"mean", number_or_null(a.mean)},
            {"stderr", number_or_null(a.stderr_)},
            {"count", a.count},
            {"errors", a.errors},
        };
    }
    json errors = json::array();
    for (const auto& r : table.rows) {
        if (r.error) {
            errors.push_back({{"algorithm", r.algorithm}, {"N", r.n}, {"trial", r.trial}, {"message", *r.error}});
        }
    }
    summary["errors"] = errors;

    std::ostringstream timings;
    timings << "algorithm,N,trial,wall_ms\n";
    for (const auto& r : table.rows) {
        timings << r.algorithm << ',' << r.n << ',' << r.trial << ',' << format_double(r.wall_ms) << '\n';
    }

    std::ostringstream plot;
    std::vector<std::string> algs;
    std::vector<int> lengths;
    for (const auto& a : table.aggregates) {
        if (std::find(algs.begin(), algs.end(), a.algorithm) == algs.end()) algs.push_back(a.algorithm);
        if (std::find(lengths.begin(), lengths.end(), a.n) == lengths.end()) lengths.push_back(a.n);
    }
    std::sort(lengths.begin(), lengths.end());
    plot << "N";
    for (const auto& alg : algs) {
        plot << ',' << alg << "_mean," << alg << "_stderr";
    }
    plot << '\n';
    for (int n : lengths) {
        plot << n;
        for (const auto& alg : algs) {
            auto it = std::find_if(table.aggregates.begin(), table.aggregates.end(),
                                   [&](const Aggregate& a) { return a.algorithm == alg && a.n == n; });
            if (it != table.aggregates.end()) {
                plot << ',' << format_double(it->mean) << ',' << format_double(it->stderr_);
            } else {
                plot << ",,";
            }
        }
        plot << '\n';
    }

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    std::ofstream results_out(dir / "results.csv", std::ios::binary | std::ios::trunc);
    std::ofstream summary_out(dir / "summary.json", std::ios::binary | std::ios::trunc);
    std::ofstream timings_out(dir / "timings.csv", std::ios::binary | std::ios::trunc);
    std::ofstream plot_out;
    if (table.emit_plot_data) {
        plot_out.open(dir / ("plotdata_" + table.name + ".csv"), std::ios::binary | std::ios::trunc);
    }
    if (!results_out || !summary_out || !timings_out || (table.emit_plot_data && !plot_out)) {
        throw IoError("cannot write report files in " + dir.string());
    }
    results_out << csv.str();
    summary_out << summary.dump(2) << '\n';
    timings_out << timings.str();
    if (table.emit_plot_data) {
        plot_out << plot.str();
    }
    if (!results_out || !summary_out || !timings_out || (table.emit_plot_data && !plot_out)) {
        throw IoError("write failed in " + dir.string());
    }
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    std::getline(in, line);
    if (line != "algorithm,N,trial,seed,mse,iters,wall_ms") {
        throw IoError("results.csv: unexpected header");
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            f.push_back(field);
        }
        if (f.size() == 6) {
            f.emplace_back();  // empty wall_ms
        }
        if (f.size() != 7) {
            throw IoError("results.csv: expected 7 fields");
        }
        ResultRow r;
        r.algorithm = f[0];
        r.n = parse_int<int>(f[1]);
        r.trial = parse_int<int>(f[2]);
        r.seed = parse_int<std::uint64_t>(f[3]);
        r.mse = parse_double(f[4]);
        r.iterations = parse_int<int>(f[5]);
        r.wall_ms = f[6].empty() ? 0.0 : parse_double(f[6]);
        if (std::isnan(r.mse)) {
            r.error = "error";
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace crew
