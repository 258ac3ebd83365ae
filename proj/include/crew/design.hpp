// SPDX-License-Identifier: Apache-2.0
//
// Joint transmit-waveform / receive-filter design algorithms.
//
//   crew_onebit  alternating design that only sees one-bit (normalized)
//                covariance measurements and rebuilds E{R} through the
//                (d, a, beta) fit
//   crew_cyclic  the same alternation with exact interference statistics
//   can_mmf      CAN sequence (interference-agnostic) + optimal filter
//
// All runs are deterministic functions of the scenario (including its seed).
// Scoring always uses the ground-truth covariance.

#pragma once

#include "crew/radar_model.hpp"
#include "crew/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crew {

enum class Algorithm { CrewOneBit, CrewCyclic, CanMmf };

std::string to_string(Algorithm a);
/// Accepts "crew_onebit", "crew_cyclic", "can_mmf". Throws ConfigError.
Algorithm parse_algorithm(const std::string& name);

struct DesignOutcome {
    Waveform s;
    ReceiveFilter w;
    std::vector<double> mse_trajectory;        ///< true MSE: start, then per outer iteration
    std::vector<double> estimated_trajectory;  ///< objective seen by the algorithm
    int iterations = 0;
    bool converged = false;
    Algorithm algorithm = Algorithm::CrewCyclic;
};

/// Unit-norm complex Gaussian start filter drawn from the scenario seed.
ReceiveFilter initial_filter(int n, std::uint64_t seed);

DesignOutcome crew_onebit(const ScenarioConfig& scenario);
DesignOutcome crew_cyclic(const ScenarioConfig& scenario);

struct CanResult {
    Waveform s;
    int iterations = 0;
};

/// Cyclic ISL reduction; returns the lowest-ISL iterate (never worse than s0).
CanResult can_design(const Waveform& s0, int cap = 10000, double tol = 1e-6);

DesignOutcome can_mmf(const ScenarioConfig& scenario);

DesignOutcome run_design(Algorithm algorithm, const ScenarioConfig& scenario);

/// MSE of the outcome's (w, s) under the scenario's true covariance.
double evaluate_true_mse(const DesignOutcome& outcome, const ScenarioConfig& scenario);

}  // namespace crew
