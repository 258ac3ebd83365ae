// SPDX-License-Identifier: Apache-2.0
//
// JSON (de)serialization of scenario and sweep configurations. Every key has
// a default; unknown keys are rejected with ConfigError.

#pragma once

#include "crew/design.hpp"
#include "crew/radar_model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace crew {

struct SweepConfig {
    std::string name = "sweep";
    ScenarioConfig base{};
    std::vector<int> lengths{25, 50, 100};
    std::vector<Algorithm> algorithms{Algorithm::CrewOneBit, Algorithm::CrewCyclic, Algorithm::CanMmf};
    int trials = 20;
    std::string out_dir = "results";
    bool emit_plot_data = true;
    bool record_wall_time = false;  ///< wall_ms column of results.csv

    void validate() const;
};

nlohmann::json load_json_file(const std::filesystem::path& path);

ScenarioConfig parse_scenario(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& scenario);

SweepConfig parse_sweep(const nlohmann::json& j);
nlohmann::json to_json(const SweepConfig& sweep);

}  // namespace crew
