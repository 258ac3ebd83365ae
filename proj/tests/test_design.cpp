// SPDX-License-Identifier: Apache-2.0

#include "crew/design.hpp"
#include "crew/radar_model.hpp"

#include <gtest/gtest.h>

#include <array>

using namespace crew;

namespace {

ScenarioConfig white_limit(int n) {
    ScenarioConfig sc;
    sc.n = n;
    sc.beta = 1e-9;
    sc.jamming = NoJamming{};
    sc.sigma2 = 0.1;
    return sc;
}

}  // namespace

TEST(AlgorithmNames, RoundTrip) {
    for (auto a : {Algorithm::CrewOneBit, Algorithm::CrewCyclic, Algorithm::CanMmf}) {
        EXPECT_EQ(parse_algorithm(to_string(a)), a);
    }
    EXPECT_THROW(parse_algorithm("crew_fre"), ConfigError);
}

TEST(InitialFilter, SeededUnitNorm) {
    const ReceiveFilter w = initial_filter(10, 42);
    EXPECT_NEAR(w.values().norm(), 1.0, 1e-14);
    EXPECT_EQ(w, initial_filter(10, 42));
    EXPECT_FALSE(w == initial_filter(10, 43));
}

TEST(CrewCyclic, MatchedFilterLimit) {
    const ScenarioConfig sc = white_limit(32);
    EXPECT_NEAR(evaluate_true_mse(crew_cyclic(sc), sc), 3.125e-3, 0.01 * 3.125e-3);
}

TEST(CanMmf, MatchedFilterLimit) {
    const ScenarioConfig sc = white_limit(32);
    EXPECT_NEAR(evaluate_true_mse(can_mmf(sc), sc), 3.125e-3, 0.01 * 3.125e-3);
}

TEST(CrewCyclic, LengthOne) {
    ScenarioConfig sc;
    sc.n = 1;
    const DesignOutcome out = crew_cyclic(sc);
    EXPECT_NEAR(evaluate_true_mse(out, sc), interference_covariance(sc)(0, 0).real(), 1e-12);
}

TEST(CrewOneBit, LengthOne) {
    ScenarioConfig sc;
    sc.n = 1;
    const DesignOutcome out = crew_onebit(sc);
    EXPECT_NEAR(evaluate_true_mse(out, sc), interference_covariance(sc)(0, 0).real(), 1e-12);
}

TEST(CrewCyclic, TrajectoryNonincreasing) {
    for (int t = 0; t < 50; ++t) {
        ScenarioConfig sc;
        sc.n = std::array{8, 16, 32}[t % 3];
        sc.seed = 100 + t;
        sc.filter_init = t % 2 == 0 ? FilterInit::Random : FilterInit::WStep;
        sc.jamming = t % 4 < 2 ? Jamming{SpotJamming{0.05 + 0.017 * t}} : Jamming{BarrageJamming{0.1, 0.35}};
        sc.controls.design_cap = 15;
        const DesignOutcome out = crew_cyclic(sc);
        for (std::size_t k = 1; k < out.mse_trajectory.size(); ++k) {
            ASSERT_LE(out.mse_trajectory[k], out.mse_trajectory[k - 1] + 1e-10) << "scenario " << t;
        }
    }
}

TEST(CrewOneBit, ImprovesOverMatchedFilterStart) {
    ScenarioConfig sc;
    sc.n = 16;
    sc.jamming = NoJamming{};
    const Waveform s = golomb(16);
    const double start = mse(s.values(), s.values(), total_covariance(s, sc.beta, interference_covariance(sc)));
    EXPECT_LE(evaluate_true_mse(crew_onebit(sc), sc), start);
}

TEST(CrewOneBit, FinalNotWorseThanInitial) {
    for (int t = 0; t < 6; ++t) {
        ScenarioConfig sc;
        sc.n = 12;
        sc.seed = 7 + t;
        sc.filter_init = t % 2 == 0 ? FilterInit::Random : FilterInit::WStep;
        sc.jamming = t < 3 ? Jamming{SpotJamming{0.2}} : Jamming{BarrageJamming{0.2, 0.3}};
        const DesignOutcome out = crew_onebit(sc);
        EXPECT_LE(out.mse_trajectory.back(), out.mse_trajectory.front() + 1e-12);
    }
}

TEST(CrewOneBit, NotBetterThanCyclicWithExactStatistics) {
    ScenarioConfig sc;
    sc.n = 25;
    EXPECT_GE(evaluate_true_mse(crew_onebit(sc), sc), evaluate_true_mse(crew_cyclic(sc), sc));
}

TEST(CrewOneBit, EstimatedModeRuns) {
    ScenarioConfig sc;
    sc.n = 8;
    sc.oracle_mode = false;
    sc.snapshots = 20'000;
    sc.controls.design_cap = 5;
    const DesignOutcome out = crew_onebit(sc);
    EXPECT_EQ(out.estimated_trajectory.size(), static_cast<std::size_t>(out.iterations));
    EXPECT_LE(out.mse_trajectory.back(), out.mse_trajectory.front());
}

TEST(Design, Deterministic) {
    ScenarioConfig sc;
    sc.n = 10;
    sc.oracle_mode = false;
    sc.snapshots = 2000;
    sc.controls.design_cap = 3;
    for (auto alg : {Algorithm::CrewOneBit, Algorithm::CrewCyclic, Algorithm::CanMmf}) {
        const DesignOutcome a = run_design(alg, sc);
        const DesignOutcome b = run_design(alg, sc);
        EXPECT_EQ(a.s, b.s);
        EXPECT_EQ(a.w, b.w);
        EXPECT_EQ(a.mse_trajectory, b.mse_trajectory);
        EXPECT_EQ(a.algorithm, alg);
    }
}

TEST(CanMmf, WorseThanCyclicUnderSpotJamming) {
    ScenarioConfig sc;
    sc.n = 25;
    EXPECT_GE(evaluate_true_mse(can_mmf(sc), sc), evaluate_true_mse(crew_cyclic(sc), sc));
}

TEST(CanDesign, SmallLengths) {
    const Waveform one(CVector::Constant(1, std::polar(1.0, 0.3)));
    EXPECT_EQ(can_design(one).s, one);
    EXPECT_NEAR(isl(can_design(golomb(2)).s), 2.0, 1e-12);
}

TEST(CanDesign, ReducesIsl) {
    const Waveform g = golomb(32);
    const CanResult r = can_design(g);
    EXPECT_LE(isl(r.s), isl(g));
    for (Eigen::Index k = 0; k < 32; ++k) EXPECT_NEAR(std::abs(r.s[k]), 1.0, 1e-12);
}

TEST(EvaluateTrueMse, ConsistentWithModel) {
    ScenarioConfig sc;
    sc.n = 9;
    DesignOutcome out = can_mmf(sc);
    const CMatrix r = total_covariance(out.s, sc.beta, interference_covariance(sc));
    const double v = evaluate_true_mse(out, sc);
    EXPECT_NEAR(v, mse(out.w, out.s, r), 1e-15);
    out.w = ReceiveFilter(out.w.values() * cdouble(0.0, -3.0));
    EXPECT_NEAR(evaluate_true_mse(out, sc), v, 1e-12 * v);
    sc.n = 10;
    EXPECT_THROW(evaluate_true_mse(out, sc), DomainError);
}

TEST(EvaluateTrueMse, WhiteNoiseMatchedFilter) {
    ScenarioConfig sc = white_limit(16);
    const Waveform s = golomb(16);
    DesignOutcome out{s, ReceiveFilter(s.values()), {}, {}, 0, true, Algorithm::CanMmf};
    sc.beta = 1e-300;  // clutter contribution underflows against sigma^2
    EXPECT_NEAR(evaluate_true_mse(out, sc), 0.1 / 16, 1e-15);
}
