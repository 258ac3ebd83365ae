// SPDX-License-Identifier: Apache-2.0

#include "crew/linalg.hpp"
#include "crew/radar_model.hpp"
#include "crew/uqp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <limits>

using namespace crew;
using crew::testing::random_gaussian;
using crew::testing::random_pd;
using crew::testing::random_phases;
using crew::testing::random_waveform;

namespace {

ReceiveFilter random_filter(Eigen::Index n, Rng& rng) { return ReceiveFilter(random_gaussian(n, rng)); }

double f_of(const ReceiveFilter& w, double mu, const Waveform& s) {
    return fractional_objective(clutter_matrix(w.values()), w.values(), mu, s.values());
}

}  // namespace

TEST(MuEstimate, Examples) {
    Rng rng(1);
    const ReceiveFilter w = random_filter(4, rng);
    const NormalizedCovariance eye{CMatrix::Identity(4, 4), std::nullopt};
    EXPECT_NEAR(mu_estimate(w, eye, RVector::Ones(4), 1.0), w.values().squaredNorm(), 1e-12);

    Rng rng2(2);
    const NormalizedCovariance g = normalize(random_pd(4, rng2));
    const RVector a = crew::testing::random_positive(4, rng2);
    EXPECT_NEAR(mu_estimate(w, g, 2.0 * a, 1.0), 4.0 * mu_estimate(w, g, a, 1.0), 1e-10);

    CVector w2(2);
    w2 << 1.0, 0.0;
    CMatrix gb(2, 2);
    gb << 1.0, 0.5, 0.5, 1.0;
    RVector a2(2);
    a2 << 2.0, 3.0;
    EXPECT_DOUBLE_EQ(mu_estimate(ReceiveFilter(w2), {gb, std::nullopt}, a2, 2.0), 2.0);
}

TEST(MuEstimate, Errors) {
    const ReceiveFilter w(CVector::Ones(2));
    const NormalizedCovariance eye{CMatrix::Identity(2, 2), std::nullopt};
    EXPECT_THROW(mu_estimate(w, eye, RVector::Ones(2), 0.0), DomainError);
    EXPECT_THROW(mu_estimate(w, eye, RVector::Zero(2), 1.0), DomainError);
    EXPECT_THROW(mu_estimate(w, eye, RVector::Ones(3), 1.0), DomainError);
}

TEST(BuildT, Linearity) {
    Rng rng(3);
    const ReceiveFilter w = random_filter(6, rng);
    const CMatrix chi = clutter_matrix(w.values());
    const CMatrix ww = w.values() * w.values().adjoint();
    EXPECT_LT(linalg::max_abs_diff(build_T(chi, ww, 0.0).t, chi), 1e-15);
    EXPECT_LT(linalg::max_abs_diff(build_T(chi, chi, 0.3).t, 0.7 * chi), 1e-14);
}

TEST(BuildT, ShiftIsPositiveDefinite) {
    Rng rng(4);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int t = 0; t < 100; ++t) {
        const ReceiveFilter w = random_filter(16, rng);
        const ShiftedMatrix m =
            build_T(clutter_matrix(w.values()), w.values() * w.values().adjoint(), u(rng));
        EXPECT_GT(m.lambda, linalg::eigen_range(m.t).max);
        EXPECT_GT(linalg::eigen_range(m.t_tilde).min, 0.0);
    }
}

TEST(PowerStep, Examples) {
    Rng rng(5);
    const Waveform s = random_waveform(5, rng);
    EXPECT_LT((power_step(CMatrix::Identity(5, 5), s).values() - s.values()).norm(), 1e-15);

    CMatrix t = CMatrix::Zero(2, 2);
    t(0, 0) = 2.0;
    t(1, 1) = 1.0;
    EXPECT_LT((power_step(t, Waveform(CVector::Ones(2))).values() - CVector::Ones(2)).norm(), 1e-15);
}

TEST(PowerStep, ZeroEntryKeepsPhase) {
    CMatrix t = CMatrix::Identity(2, 2);
    t(1, 1) = 0.0;
    CVector v(2);
    v << 1.0, cdouble(0.0, 1.0);
    EXPECT_EQ(power_step(t, Waveform(v))[1], cdouble(0.0, 1.0));
}

TEST(PowerStep, Monotone) {
    Rng rng(6);
    for (int t = 0; t < 1000; ++t) {
        const CMatrix tt = random_pd(16, rng, 1e-3);
        const Waveform s = random_waveform(16, rng);
        const Waveform next = power_step(tt, s);
        const double before = std::real(s.values().dot(tt * s.values()));
        const double after = std::real(next.values().dot(tt * next.values()));
        ASSERT_GE(after, before - 1e-12);
    }
}

TEST(Dinkelbach, DescentAndUnimodular) {
    Rng rng(7);
    std::uniform_real_distribution<double> mu(0.0, 2.0);
    for (int t = 0; t < 60; ++t) {
        const int n = std::array{8, 16, 32}[t % 3];
        const ReceiveFilter w = random_filter(n, rng);
        const Waveform s0 = random_waveform(n, rng);
        const double m = mu(rng);
        const SStepResult r = dinkelbach_s_step(w, s0, m);
        for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
            ASSERT_LE(r.objective_trace[k], r.objective_trace[k - 1] + 1e-12);
        }
        EXPECT_LE(f_of(w, m, r.s), f_of(w, m, s0) + 1e-12);
        EXPECT_NEAR(r.objective_trace.back(), f_of(w, m, r.s), 1e-12 * r.objective_trace.back());
        for (Eigen::Index k = 0; k < n; ++k) ASSERT_NEAR(std::abs(r.s[k]), 1.0, 1e-12);

        // g(s_out) = a(s_out) - f(s0) b(s_out) <= 0
        const CMatrix chi = clutter_matrix(w.values());
        const double a = std::real(r.s.values().dot(chi * r.s.values())) + m;
        const double b = std::norm(w.values().dot(r.s.values()));
        EXPECT_LE(a - r.objective_trace.front() * b, 1e-10 * std::max(1.0, a));
    }
}

TEST(Dinkelbach, LengthOneUnchanged) {
    const Waveform s0(CVector::Constant(1, std::polar(1.0, 0.4)));
    const SStepResult r = dinkelbach_s_step(ReceiveFilter(CVector::Ones(1)), s0, 0.0);
    EXPECT_EQ(r.s, s0);
}

TEST(Dinkelbach, PhaseInvariance) {
    Rng rng(8);
    const ReceiveFilter w = random_filter(12, rng);
    const Waveform s0 = random_waveform(12, rng);
    const Waveform rotated(s0.values() * std::polar(1.0, 1.1));
    const double f1 = f_of(w, 0.3, dinkelbach_s_step(w, s0, 0.3).s);
    const double f2 = f_of(w, 0.3, dinkelbach_s_step(w, rotated, 0.3).s);
    EXPECT_NEAR(f1, f2, 1e-8 * f1);
}

TEST(Dinkelbach, Errors) {
    CVector w(2), s(2);
    w << 1.0, -1.0;
    s << 1.0, 1.0;
    EXPECT_THROW(dinkelbach_s_step(ReceiveFilter(w), Waveform(s), 0.0), DegenerateFilterError);
    EXPECT_THROW(dinkelbach_s_step(ReceiveFilter(CVector::Ones(2)), Waveform(s), -1.0), DomainError);
    EXPECT_THROW(dinkelbach_s_step(ReceiveFilter(CVector::Ones(3)), Waveform(s), 0.0), DomainError);
}

TEST(Dinkelbach, NearOptimalOnQpskGrid) {
    Rng rng(9);
    const std::array<cdouble, 4> alphabet{cdouble(1, 0), cdouble(0, 1), cdouble(-1, 0), cdouble(0, -1)};
    int good = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const ReceiveFilter w = random_filter(4, rng);
        const double mu = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        double best = std::numeric_limits<double>::infinity();
        for (int code = 0; code < 256; ++code) {
            CVector s(4);
            for (int k = 0; k < 4; ++k) s[k] = alphabet[(code >> (2 * k)) & 3];
            try {
                best = std::min(best, f_of(w, mu, Waveform(s)));
            } catch (const DegenerateFilterError&) {
            }
        }
        const double got = f_of(w, mu, dinkelbach_s_step(w, golomb(4), mu).s);
        good += got <= 1.05 * best ? 1 : 0;
    }
    EXPECT_GE(good, 45);
}
