// SPDX-License-Identifier: Apache-2.0

#include "crew/design.hpp"

#include "crew/covfit.hpp"
#include "crew/onebit.hpp"
#include "crew/seeds.hpp"
#include "crew/uqp.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <limits>
#include <numbers>

namespace crew {

namespace {

constexpr std::uint64_t kFilterStream = 1;
constexpr std::uint64_t kMeasurementStream = 2;

SStepControls s_controls(const SolverControls& c) {
    return SStepControls{c.s_outer_cap, c.s_outer_tol, c.s_inner_cap, c.s_inner_tol};
}

FitControls fit_controls(const SolverControls& c) {
    FitControls out;
    out.sweep_cap = c.fit_sweep_cap;
    out.tol = c.fit_tol;
    return out;
}

/// |current - previous| / |previous|; the one-bit objective is only known up
/// to a global scale, so the stopping rule is scale-free.
double relative_change(double previous, double current) {
    if (!std::isfinite(previous)) {
        return std::numeric_limits<double>::infinity();
    }
    return std::abs(current - previous) / std::max(std::abs(previous), 1e-300);
}

}  // namespace

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::CrewOneBit: return "crew_onebit";
        case Algorithm::CrewCyclic: return "crew_cyclic";
        case Algorithm::CanMmf: return "can_mmf";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "crew_onebit") return Algorithm::CrewOneBit;
    if (name == "crew_cyclic") return Algorithm::CrewCyclic;
    if (name == "can_mmf") return Algorithm::CanMmf;
    throw ConfigError("unknown algorithm '" + name + "'");
}

ReceiveFilter initial_filter(int n, std::uint64_t seed) {
    if (n < 1) {
        throw DomainError("initial_filter: N must be >= 1");
    }
    Rng rng(derive_seed(seed, kFilterStream));
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector w(n);
    for (auto& v : w) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = cdouble(re, im);
    }
    w /= w.norm();
    return ReceiveFilter(std::move(w));
}

DesignOutcome crew_onebit(const ScenarioConfig& scenario) {
    scenario.validate();
    const auto& ctl = scenario.controls;
    const int n = scenario.n;
    const CMatrix gamma = interference_covariance(scenario);
    const CMatrix gamma_factor = covariance_factor(gamma);
    Rng rng(derive_seed(scenario.seed, kMeasurementStream));

    Waveform s = golomb(n);

    // Listen-only measurement: normalized interference covariance.
    NormalizedCovariance gamma_bar =
        scenario.oracle_mode ? normalize(gamma) : estimate_normalized(gamma_factor, scenario.snapshots, rng);
    gamma_bar.scale.reset();

    auto measure_rbar = [&](const Waveform& x) {
        NormalizedCovariance r =
            scenario.oracle_mode
                ? normalize(total_covariance(x, scenario.beta, gamma))
                : estimate_normalized_echo(x.values(), scenario.beta, gamma_factor, scenario.snapshots, rng);
        r.scale.reset();
        return r;
    };

    // The first s-step needs mu before any w-step: bootstrap the scales from
    // a measurement taken with the initial waveform.
    CMatrix s_matrix = clutter_matrix(s.values());
    NormalizedCovariance rbar0 = measure_rbar(s);
    FitResult scales = fit(rbar0, gamma_bar, s_matrix, default_fit_init(s_matrix, 1.0), fit_controls(ctl));
    MomentEstimate moment(n);

    ReceiveFilter w = initial_filter(n, scenario.seed);
    double previous = std::numeric_limits<double>::quiet_NaN();
    if (scenario.filter_init == FilterInit::WStep) {
        moment = update_moment(std::move(moment), scales.d);
        const CMatrix q = build_Q(moment, rbar0);
        w = mmf(q, s);
        previous = mse(w, s, q);
    }

    DesignOutcome out{s, w, {}, {}, 0, false, Algorithm::CrewOneBit};
    out.mse_trajectory.push_back(mse(w, s, total_covariance(s, scenario.beta, gamma)));

    for (int t = 0; t < ctl.design_cap; ++t) {
        const double mu = mu_estimate(w, gamma_bar, scales.a, scales.beta);
        s = dinkelbach_s_step(w, s, mu, s_controls(ctl)).s;

        const NormalizedCovariance rbar = measure_rbar(s);
        s_matrix = clutter_matrix(s.values());
        scales = fit(rbar, gamma_bar, s_matrix, FitInit{scales.d, scales.a, scales.beta}, fit_controls(ctl));
        moment = update_moment(std::move(moment), scales.d);
        const CMatrix q = build_Q(moment, rbar);
        w = mmf(q, s);

        const double estimated = mse(w, s, q);
        out.estimated_trajectory.push_back(estimated);
        out.mse_trajectory.push_back(mse(w, s, total_covariance(s, scenario.beta, gamma)));
        out.iterations = t + 1;
        if (relative_change(previous, estimated) < ctl.design_eps) {
            out.converged = true;
            break;
        }
        previous = estimated;
    }
    out.s = s;
    out.w = w;
    return out;
}

DesignOutcome crew_cyclic(const ScenarioConfig& scenario) {
    scenario.validate();
    const auto& ctl = scenario.controls;
    const int n = scenario.n;
    const CMatrix gamma = interference_covariance(scenario);

    Waveform s = golomb(n);
    ReceiveFilter w = scenario.filter_init == FilterInit::WStep
                          ? mmf(total_covariance(s, scenario.beta, gamma), s)
                          : initial_filter(n, scenario.seed);

    DesignOutcome out{s, w, {}, {}, 0, false, Algorithm::CrewCyclic};
    double previous = mse(w, s, total_covariance(s, scenario.beta, gamma));
    out.mse_trajectory.push_back(previous);

    for (int t = 0; t < ctl.design_cap; ++t) {
        const double mu = std::real(w.values().dot(gamma * w.values())) / scenario.beta;
        s = dinkelbach_s_step(w, s, mu, s_controls(ctl)).s;
        const CMatrix r = total_covariance(s, scenario.beta, gamma);
        w = mmf(r, s);
        const double current = mse(w, s, r);
        out.mse_trajectory.push_back(current);
        out.estimated_trajectory.push_back(current);
        out.iterations = t + 1;
        if (relative_change(previous, current) < ctl.design_eps) {
            out.converged = true;
            break;
        }
        previous = current;
    }
    out.s = s;
    out.w = w;
    return out;
}

CanResult can_design(const Waveform& s0, int cap, double tol) {
    const auto n = s0.size();
    CanResult best{s0, 0};
    double best_isl = isl(s0);
    if (best_isl == 0.0) {
        return best;  // nothing to reduce (N = 1)
    }

    Eigen::FFT<double> fft;
    std::vector<cdouble> padded(2 * n, cdouble{0.0, 0.0});
    std::vector<cdouble> spectrum;
    std::vector<cdouble> back;
    CVector x = s0.values();
    double previous = best_isl;

    for (int it = 0; it < cap; ++it) {
        for (Eigen::Index k = 0; k < n; ++k) {
            padded[k] = x[k];
        }
        std::fill(padded.begin() + n, padded.end(), cdouble{0.0, 0.0});
        fft.fwd(spectrum, padded);
        // Unit-modulus spectrum target, scaled by sqrt(N); only phases survive.
        const double amp = std::sqrt(static_cast<double>(n));
        for (auto& z : spectrum) {
            const double mag = std::abs(z);
            z = mag > 0.0 ? amp * z / mag : cdouble(amp, 0.0);
        }
        fft.inv(back, spectrum);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double mag = std::abs(back[k]);
            x[k] = mag > 0.0 ? back[k] / mag : x[k];
        }
        const Waveform candidate = Waveform::from_phases(x);
        const double current = isl(candidate);
        best.iterations = it + 1;
        if (current < best_isl) {
            best_isl = current;
            best.s = candidate;
        }
        if (std::abs(previous - current) < tol * previous) {
            break;
        }
        previous = current;
    }
    return best;
}

DesignOutcome can_mmf(const ScenarioConfig& scenario) {
    scenario.validate();
    const CMatrix gamma = interference_covariance(scenario);
    const CanResult can = can_design(golomb(scenario.n), scenario.controls.can_cap, scenario.controls.can_tol);
    const CMatrix r = total_covariance(can.s, scenario.beta, gamma);
    ReceiveFilter w = mmf(r, can.s);
    const double value = mse(w, can.s, r);
    DesignOutcome out{can.s, w, {value}, {value}, can.iterations, true, Algorithm::CanMmf};
    return out;
}

DesignOutcome run_design(Algorithm algorithm, const ScenarioConfig& scenario) {
    switch (algorithm) {
        case Algorithm::CrewOneBit: return crew_onebit(scenario);
        case Algorithm::CrewCyclic: return crew_cyclic(scenario);
        case Algorithm::CanMmf: return can_mmf(scenario);
    }
    throw ConfigError("unknown algorithm");
}

double evaluate_true_mse(const DesignOutcome& outcome, const ScenarioConfig& scenario) {
    if (outcome.s.size() != scenario.n || outcome.w.size() != scenario.n) {
        throw DomainError("evaluate_true_mse: outcome does not match scenario length");
    }
    const CMatrix r = total_covariance(outcome.s, scenario.beta, interference_covariance(scenario));
    return mse(outcome.w, outcome.s, r);
}

}  // namespace crew
