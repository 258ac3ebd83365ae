// SPDX-License-Identifier: Apache-2.0

#include "crew/config.hpp"

#include <fstream>
#include <set>

namespace crew {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

Jamming parse_jamming(const json& j) {
    reject_unknown(j, {"kind", "f0", "f1", "f2"}, "jamming");
    std::string kind = "none";
    read(j, "kind", kind, "jamming");
    if (kind == "none") {
        return NoJamming{};
    }
    if (kind == "spot") {
        SpotJamming s;
        read(j, "f0", s.f0, "jamming");
        return s;
    }
    if (kind == "barrage") {
        BarrageJamming b;
        read(j, "f1", b.f1, "jamming");
        read(j, "f2", b.f2, "jamming");
        return b;
    }
    throw ConfigError("jamming.kind: expected none, spot or barrage");
}

json jamming_json(const Jamming& jam) {
    if (const auto* s = std::get_if<SpotJamming>(&jam)) {
        return {{"kind", "spot"}, {"f0", s->f0}};
    }
    if (const auto* b = std::get_if<BarrageJamming>(&jam)) {
        return {{"kind", "barrage"}, {"f1", b->f1}, {"f2", b->f2}};
    }
    return {{"kind", "none"}};
}

SolverControls parse_controls(const json& j) {
    const std::string w = "controls";
    reject_unknown(j,
                   {"s_outer_cap", "s_outer_tol", "s_inner_cap", "s_inner_tol", "fit_sweep_cap", "fit_tol",
                    "design_cap", "design_eps", "can_cap", "can_tol"},
                   w);
    SolverControls c;
    read(j, "s_outer_cap", c.s_outer_cap, w);
    read(j, "s_outer_tol", c.s_outer_tol, w);
    read(j, "s_inner_cap", c.s_inner_cap, w);
    read(j, "s_inner_tol", c.s_inner_tol, w);
    read(j, "fit_sweep_cap", c.fit_sweep_cap, w);
    read(j, "fit_tol", c.fit_tol, w);
    read(j, "design_cap", c.design_cap, w);
    read(j, "design_eps", c.design_eps, w);
    read(j, "can_cap", c.can_cap, w);
    read(j, "can_tol", c.can_tol, w);
    return c;
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

ScenarioConfig parse_scenario(const json& j) {
    const std::string w = "scenario";
    reject_unknown(j,
                   {"N", "beta", "sigma2", "sigmaJ2", "jamming", "snapshots", "oracle_mode", "seed",
                    "filter_init", "controls"},
                   w);
    ScenarioConfig s;
    read(j, "N", s.n, w);
    read(j, "beta", s.beta, w);
    read(j, "sigma2", s.sigma2, w);
    read(j, "sigmaJ2", s.sigmaJ2, w);
    read(j, "snapshots", s.snapshots, w);
    read(j, "oracle_mode", s.oracle_mode, w);
    read(j, "seed", s.seed, w);
    if (j.contains("jamming")) {
        s.jamming = parse_jamming(j.at("jamming"));
    }
    if (j.contains("filter_init")) {
        std::string init;
        read(j, "filter_init", init, w);
        if (init == "w_step") {
            s.filter_init = FilterInit::WStep;
        } else if (init == "random") {
            s.filter_init = FilterInit::Random;
        } else {
            throw ConfigError("scenario.filter_init: expected w_step or random");
        }
    }
    if (j.contains("controls")) {
        s.controls = parse_controls(j.at("controls"));
    }
    s.validate();
    return s;
}

json to_json(const ScenarioConfig& s) {
    const auto& c = s.controls;
    return {
        {"N", s.n},
        {"beta", s.beta},
        {"sigma2", s.sigma2},
        {"sigmaJ2", s.sigmaJ2},
        {"jamming", jamming_json(s.jamming)},
        {"snapshots", s.snapshots},
        {"oracle_mode", s.oracle_mode},
        {"seed", s.seed},
        {"filter_init", s.filter_init == FilterInit::WStep ? "w_step" : "random"},
        {"controls",
         {{"s_outer_cap", c.s_outer_cap},
          {"s_outer_tol", c.s_outer_tol},
          {"s_inner_cap", c.s_inner_cap},
          {"s_inner_tol", c.s_inner_tol},
          {"fit_sweep_cap", c.fit_sweep_cap},
          {"fit_tol", c.fit_tol},
          {"design_cap", c.design_cap},
          {"design_eps", c.design_eps},
          {"can_cap", c.can_cap},
          {"can_tol", c.can_tol}}},
    };
}

void SweepConfig::validate() const {
    if (lengths.empty()) {
        throw ConfigError("sweep: lengths must be nonempty");
    }
    for (int n : lengths) {
        if (n < 1) {
            throw ConfigError("sweep: every length must be >= 1");
        }
    }
    if (algorithms.empty()) {
        throw ConfigError("sweep: algorithms must be nonempty");
    }
    if (trials < 1) {
        throw ConfigError("sweep: trials must be >= 1");
    }
    if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("sweep: name must be a nonempty file-name fragment");
    }
    base.validate();
}

SweepConfig parse_sweep(const json& j) {
    const std::string w = "sweep";
    reject_unknown(j,
                   {"name", "scenario", "lengths", "algorithms", "trials", "out_dir", "emit_plot_data",
                    "record_wall_time"},
                   w);
    SweepConfig s;
    read(j, "name", s.name, w);
    if (j.contains("scenario")) {
        s.base = parse_scenario(j.at("scenario"));
    }
    read(j, "lengths", s.lengths, w);
    if (j.contains("algorithms")) {
        std::vector<std::string> names;
        read(j, "algorithms", names, w);
        s.algorithms.clear();
        for (const auto& n : names) {
            s.algorithms.push_back(parse_algorithm(n));
        }
    }
    read(j, "trials", s.trials, w);
    read(j, "out_dir", s.out_dir, w);
    read(j, "emit_plot_data", s.emit_plot_data, w);
    read(j, "record_wall_time", s.record_wall_time, w);
    s.validate();
    return s;
}

json to_json(const SweepConfig& s) {
    json algs = json::array();
    for (auto a : s.algorithms) {
        algs.push_back(to_string(a));
    }
    return {
        {"name", s.name},
        {"scenario", to_json(s.base)},
        {"lengths", s.lengths},
        {"algorithms", algs},
        {"trials", s.trials},
        {"out_dir", s.out_dir},
        {"emit_plot_data", s.emit_plot_data},
        {"record_wall_time", s.record_wall_time},
    };
}

}  // namespace crew
