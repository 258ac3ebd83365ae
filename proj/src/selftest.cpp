// SPDX-License-Identifier: Apache-2.0

#include "crew/selftest.hpp"

#include "crew/covfit.hpp"
#include "crew/design.hpp"
#include "crew/linalg.hpp"
#include "crew/onebit.hpp"
#include "crew/radar_model.hpp"
#include "crew/uqp.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace crew {

namespace {

CVector random_phases(int n, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    CVector v(n);
    for (auto& x : v) {
        x = std::polar(1.0, u(rng));
    }
    return v;
}

bool clutter_identity() {
    Rng rng(11);
    const CVector x = random_phases(9, rng);
    CMatrix brute = CMatrix::Zero(9, 9);
    for (int k = -8; k <= 8; ++k) {
        if (k != 0) {
            const CVector v = shift(x, k);
            brute += v * v.adjoint();
        }
    }
    return linalg::max_abs_diff(brute, clutter_matrix(x)) < 1e-12;
}

bool arcsine_round_trip() {
    ScenarioConfig sc;
    sc.n = 8;
    const NormalizedCovariance rbar = normalize(interference_covariance(sc));
    const NormalizedCovariance back = arcsine_recover(arcsine_forward(rbar.matrix));
    return linalg::max_abs_diff(back.matrix, rbar.matrix) < 1e-12;
}

bool matched_filter_limit() {
    ScenarioConfig sc;
    sc.n = 16;
    sc.beta = 1e-9;
    sc.jamming = NoJamming{};
    sc.sigma2 = 0.1;
    const Waveform s = golomb(sc.n);
    const CMatrix r = total_covariance(s, sc.beta, interference_covariance(sc));
    const double value = mse(mmf(r, s), s, r);
    return std::abs(value - sc.sigma2 / sc.n) < 1e-3 * sc.sigma2 / sc.n;
}

bool fit_exact() {
    ScenarioConfig sc;
    sc.n = 8;
    const Waveform s = golomb(sc.n);
    const CMatrix gamma = interference_covariance(sc);
    const CMatrix sm = clutter_matrix(s.values());
    const FitResult r = fit(normalize(total_covariance(s, 1.0, gamma)), normalize(gamma), sm);
    return r.relative_residual < 1e-6;
}

bool dinkelbach_descent() {
    Rng rng(5);
    const int n = 12;
    const ReceiveFilter w(random_phases(n, rng));
    const Waveform s0(random_phases(n, rng));
    const SStepResult r = dinkelbach_s_step(w, s0, 0.5);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
        if (r.objective_trace[i] > r.objective_trace[i - 1] + 1e-12) {
            return false;
        }
    }
    return true;
}

bool cyclic_short_run() {
    ScenarioConfig sc;
    sc.n = 10;
    sc.controls.design_cap = 5;
    const DesignOutcome out = crew_cyclic(sc);
    return out.mse_trajectory.back() <= out.mse_trajectory.front() + 1e-12;
}

}  // namespace

int run_selftest(std::ostream& out) {
    const std::vector<std::pair<std::string, std::function<bool()>>> checks{
        {"clutter_matrix", clutter_identity},
        {"arcsine_round_trip", arcsine_round_trip},
        {"matched_filter_limit", matched_filter_limit},
        {"fit_exact", fit_exact},
        {"dinkelbach_descent", dinkelbach_descent},
        {"cyclic_short_run", cyclic_short_run},
    };
    int failures = 0;
    for (const auto& [name, check] : checks) {
        bool ok = false;
        try {
            ok = check();
        } catch (const std::exception& e) {
            out << name << ": exception: " << e.what() << '\n';
        }
        out << (ok ? "ok   " : "FAIL ") << name << '\n';
        failures += ok ? 0 : 1;
    }
    return failures;
}

}  // namespace crew
