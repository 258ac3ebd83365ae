// SPDX-License-Identifier: Apache-2.0
//
// crewctl: design, estimate-cov, sweep, selftest.
//
// Exit codes: 0 success, 1 hard error, 2 sweep finished with failed cells.

#include "crew/bench.hpp"
#include "crew/config.hpp"
#include "crew/design.hpp"
#include "crew/linalg.hpp"
#include "crew/onebit.hpp"
#include "crew/selftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using nlohmann::json;

json complex_vector(const crew::CVector& v) {
    json re = json::array();
    json im = json::array();
    for (const auto& z : v) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return {{"re", re}, {"im", im}};
}

json complex_matrix(const crew::CMatrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array();
        json ii = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ii.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return {{"re", re}, {"im", im}};
}

void write_json(const json& j, const std::string& out_dir, const std::string& file) {
    if (out_dir.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / file;
    std::ofstream out(path);
    if (!out) {
        throw crew::IoError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<bool> oracle_mode;
};

crew::ScenarioConfig scenario_from(const Common& c, std::optional<int> n) {
    crew::ScenarioConfig sc = c.config.empty() ? crew::ScenarioConfig{} : crew::parse_scenario(crew::load_json_file(c.config));
    if (n) sc.n = *n;
    if (c.seed) sc.seed = *c.seed;
    if (c.oracle_mode) sc.oracle_mode = *c.oracle_mode;
    sc.validate();
    return sc;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON config file");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--seed", c.seed, "base seed override");
    sub->add_option("--oracle-mode", c.oracle_mode, "use exact normalized covariances (true/false)");
}

int cmd_design(const Common& c, const std::string& algorithm, std::optional<int> n) {
    const crew::ScenarioConfig sc = scenario_from(c, n);
    const crew::Algorithm alg = crew::parse_algorithm(algorithm);
    const crew::DesignOutcome out = crew::run_design(alg, sc);
    json j{
        {"algorithm", crew::to_string(alg)},
        {"scenario", crew::to_json(sc)},
        {"mse", crew::evaluate_true_mse(out, sc)},
        {"iterations", out.iterations},
        {"converged", out.converged},
        {"mse_trajectory", out.mse_trajectory},
        {"estimated_trajectory", out.estimated_trajectory},
        {"s", complex_vector(out.s.values())},
        {"w", complex_vector(out.w.values())},
    };
    write_json(j, c.out, "design.json");
    return 0;
}

int cmd_estimate(const Common& c, std::optional<int> n) {
    const crew::ScenarioConfig sc = scenario_from(c, n);
    const crew::Waveform s = crew::golomb(sc.n);
    const crew::CMatrix r = crew::total_covariance(s, sc.beta, crew::interference_covariance(sc));
    const crew::NormalizedCovariance truth = crew::normalize(r);
    const crew::SnapshotBatch batch = crew::draw_snapshots(r, sc.snapshots, sc.seed);
    const crew::NormalizedCovariance est = crew::arcsine_recover(crew::sign_covariance(batch));
    json j{
        {"N", sc.n},
        {"snapshots", sc.snapshots},
        {"seed", sc.seed},
        {"max_abs_error", crew::linalg::max_abs_diff(est.matrix, truth.matrix)},
        {"rbar_true", complex_matrix(truth.matrix)},
        {"rbar_estimate", complex_matrix(est.matrix)},
    };
    write_json(j, c.out, "estimate.json");
    return 0;
}

int cmd_sweep(const Common& c, int jobs) {
    if (c.config.empty()) {
        throw crew::ConfigError("sweep requires --config");
    }
    crew::SweepConfig cfg = crew::parse_sweep(crew::load_json_file(c.config));
    if (c.seed) cfg.base.seed = *c.seed;
    if (c.oracle_mode) cfg.base.oracle_mode = *c.oracle_mode;
    if (!c.out.empty()) cfg.out_dir = c.out;
    const crew::ResultsTable table = crew::run_sweep(cfg, jobs);
    crew::emit_report(table, cfg.out_dir);
    for (const auto& a : table.aggregates) {
        std::cout << a.algorithm << " N=" << a.n << " mean=" << crew::format_double(a.mean)
                  << " stderr=" << crew::format_double(a.stderr_) << " ok=" << a.count << " err=" << a.errors << '\n';
    }
    return table.error_count() > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CREW waveform and receive-filter design"};
    app.require_subcommand(1);

    Common design_opts, estimate_opts, sweep_opts;
    std::string algorithm = "crew_cyclic";
    std::optional<int> design_n, estimate_n;
    int jobs = 1;

    auto* design = app.add_subcommand("design", "design one scenario, print outcome JSON");
    add_common(design, design_opts);
    design->add_option("--algorithm", algorithm, "crew_onebit | crew_cyclic | can_mmf");
    design->add_option("--n", design_n, "sequence length override");

    auto* estimate = app.add_subcommand("estimate-cov", "one-bit covariance recovery demo");
    add_common(estimate, estimate_opts);
    estimate->add_option("--n", estimate_n, "sequence length override");

    auto* sweep = app.add_subcommand("sweep", "run a sweep config and write report files");
    add_common(sweep, sweep_opts);
    sweep->add_option("--jobs", jobs, "parallel cells")->check(CLI::PositiveNumber);

    auto* selftest = app.add_subcommand("selftest", "run internal consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*design) return cmd_design(design_opts, algorithm, design_n);
        if (*estimate) return cmd_estimate(estimate_opts, estimate_n);
        if (*sweep) return cmd_sweep(sweep_opts, jobs);
        if (*selftest) return crew::run_selftest(std::cout) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
