// SPDX-License-Identifier: Apache-2.0
//
// Deterministic radar signal model: range-shift operators, clutter and
// interference covariances, the MSE of the mismatched-filter estimate of the
// range-cell scattering coefficient, jamming spectra and waveform seeds.
//
// Received-signal model for one range cell, with clutter from the 2N-2
// neighbouring cells (power beta each) and signal-independent interference
// Gamma:
//
//     R(s) = beta * sum_{k != 0} J_k s s^H J_k^H + Gamma
//     MSE(w, s) = w^H R w / |w^H s|^2

#pragma once

#include "crew/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace crew {

// ---------------------------------------------------------------------------
// Scenario description
// ---------------------------------------------------------------------------

struct NoJamming {};

struct SpotJamming {
    double f0 = 0.2;  ///< normalized frequency in [0, 1)
};

struct BarrageJamming {
    double f1 = 0.2;  ///< band start, normalized
    double f2 = 0.3;  ///< band end, normalized, f1 < f2 < 1
};

using Jamming = std::variant<NoJamming, SpotJamming, BarrageJamming>;

/// Iteration caps and tolerances for every loop in the design algorithms.
struct SolverControls {
    // Dinkelbach s-step
    int s_outer_cap = 100;
    double s_outer_tol = 1e-6;
    int s_inner_cap = 1000;
    double s_inner_tol = 1e-8;
    // covariance fit
    int fit_sweep_cap = 500;
    double fit_tol = 1e-8;
    // alternating design loop
    int design_cap = 50;
    double design_eps = 1e-5;
    // CAN baseline
    int can_cap = 10000;
    double can_tol = 1e-6;
};

/// Start filter of the alternating designs: the closed-form filter for the
/// initial waveform, or a seeded unit-norm complex Gaussian vector.
enum class FilterInit { WStep, Random };

struct ScenarioConfig {
    int n = 25;
    double beta = 1.0;      ///< average clutter power
    double sigma2 = 0.1;    ///< white-noise power
    double sigmaJ2 = 100.0; ///< jamming power
    Jamming jamming = SpotJamming{};
    int snapshots = 10000;  ///< one-bit snapshots per covariance measurement
    bool oracle_mode = true;
    std::uint64_t seed = 1;
    FilterInit filter_init = FilterInit::WStep;
    SolverControls controls{};

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

std::string jamming_name(const Jamming& j);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// J_k v without materializing J_k. k >= 0 shifts down (k leading zeros),
/// k < 0 applies J_{|k|}^H (|k| trailing zeros). Requires |k| < N.
CVector shift(const CVector& v, int k);

/// sum_{k != 0} J_k x x^H J_k^H, built in O(N^2) from the aperiodic
/// autocorrelation of x: the full-k sum is Toeplitz with entries r_{i-l},
/// from which the k = 0 term x x^H is removed.
CMatrix clutter_matrix(const CVector& x);

/// Aperiodic autocorrelation r_m = sum_k x_{k+m} conj(x_k), m = 0..N-1.
CVector autocorrelation(const CVector& x);

/// beta * clutter_matrix(s) + Gamma.
CMatrix total_covariance(const Waveform& s, double beta, const CMatrix& gamma);

/// (w^H R w) / |w^H s|^2. Throws DegenerateFilterError if
/// |w^H s| <= 1e-12 ||w|| ||s||.
double mse(const CVector& w, const CVector& s, const CMatrix& r);
double mse(const ReceiveFilter& w, const Waveform& s, const CMatrix& r);

/// Diagonal loading applied by mmf when lambda_min / lambda_max < 1e-10.
inline constexpr double kConditionFloor = 1e-10;

/// Closed-form MSE-optimal filter w = R^{-1} s.
ReceiveFilter mmf(const CMatrix& r, const Waveform& s);

/// Spectrum {eta_p} on f_p = p / (2N-1), p = 0..2N-2, total mass 1
/// (all zero for NoJamming).
RVector jamming_spectrum(const ScenarioConfig& scenario);

/// Toeplitz [Gamma_J]_{k,l} = gamma_{k-l}, gamma_m the inverse DFT of eta.
CMatrix jamming_covariance(const RVector& eta);

/// sigmaJ2 * Gamma_J + sigma2 * I.
CMatrix interference_covariance(const ScenarioConfig& scenario);

/// Polyphase Golomb sequence s_k = exp(j pi k (k-1) / N), k = 1..N.
Waveform golomb(int n);

/// Integrated sidelobe level 2 * sum_{m=1}^{N-1} |r_m|^2.
double isl(const Waveform& s);

}  // namespace crew
