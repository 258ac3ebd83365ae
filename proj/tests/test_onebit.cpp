// SPDX-License-Identifier: Apache-2.0

#include "crew/linalg.hpp"
#include "crew/onebit.hpp"
#include "crew/radar_model.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace crew;
using crew::testing::random_pd;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

CMatrix sample_covariance(const CMatrix& y) { return y * y.adjoint() / static_cast<double>(y.cols()); }

double max_error(const CMatrix& a, const CMatrix& b) { return linalg::max_abs_diff(a, b); }

}  // namespace

TEST(DrawSnapshots, ZeroCovariance) {
    const SnapshotBatch b = draw_snapshots(CMatrix::Zero(3, 3), 10, 1);
    EXPECT_EQ(b.samples, CMatrix::Zero(3, 10));
}

TEST(DrawSnapshots, IdentitySampleCovariance) {
    const SnapshotBatch b = draw_snapshots(CMatrix::Identity(4, 4), 1'000'000, 2);
    EXPECT_LE(max_error(sample_covariance(b.samples), CMatrix::Identity(4, 4)), 5e-3);
}

TEST(DrawSnapshots, Deterministic) {
    Rng rng(3);
    const CMatrix r = random_pd(5, rng);
    EXPECT_EQ(draw_snapshots(r, 50, 9).samples, draw_snapshots(r, 50, 9).samples);
    EXPECT_NE(draw_snapshots(r, 50, 9).samples, draw_snapshots(r, 50, 10).samples);
}

TEST(DrawSnapshots, Errors) {
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(1, 1) = -1.0;
    EXPECT_THROW(draw_snapshots(bad, 5, 1), DomainError);
    EXPECT_THROW(draw_snapshots(CMatrix::Identity(2, 2), 0, 1), DomainError);
}

TEST(CovarianceFactor, SemidefiniteFallback) {
    CVector v(3);
    v << 1.0, cdouble(0.0, 1.0), -1.0;
    const CMatrix r = v * v.adjoint();
    const CMatrix l = covariance_factor(r);
    EXPECT_LT(max_error(l * l.adjoint(), r), 1e-12);
}

TEST(Csign, Examples) {
    CVector y(3);
    y << cdouble(3, -4), cdouble(0, 0), cdouble(-0.1, 2);
    const CVector u = csign(y);
    EXPECT_LT(std::abs(u[0] - cdouble(kInvSqrt2, -kInvSqrt2)), 1e-15);
    EXPECT_LT(std::abs(u[1] - cdouble(kInvSqrt2, kInvSqrt2)), 1e-15);
    EXPECT_LT(std::abs(u[2] - cdouble(-kInvSqrt2, kInvSqrt2)), 1e-15);
    for (const auto& z : u) EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
}

TEST(Csign, Idempotent) {
    Rng rng(4);
    const CVector y = crew::testing::random_gaussian(50, rng);
    EXPECT_EQ(csign(csign(y)), csign(y));
}

TEST(SignCovariance, SingleSnapshot) {
    Rng rng(5);
    SnapshotBatch b{crew::testing::random_gaussian(4, 1, rng), 0};
    const CMatrix r = sign_covariance(b);
    const CVector u = csign(CVector(b.samples.col(0)));
    EXPECT_LT(max_error(r, u * u.adjoint()), 1e-15);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(r(k, k), cdouble(1.0, 0.0));
}

TEST(SignCovariance, WhiteDecorrelates) {
    const CMatrix r = sign_covariance(draw_snapshots(CMatrix::Identity(4, 4), 1'000'000, 6));
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(r(i, i), cdouble(1.0, 0.0));
        for (int j = 0; j < 4; ++j) {
            if (i != j) EXPECT_LE(std::abs(r(i, j)), 5e-3);
        }
    }
}

TEST(ArcsineRecover, Identity) {
    const NormalizedCovariance r = arcsine_recover(CMatrix::Identity(3, 3));
    EXPECT_LT(max_error(r.matrix, CMatrix::Identity(3, 3)), 1e-15);
    EXPECT_FALSE(r.scale.has_value());
}

TEST(ArcsineRecover, HalfEntry) {
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = 0.5;
    m(1, 0) = 0.5;
    EXPECT_NEAR(arcsine_recover(m).matrix(0, 1).real(), 0.70710678118654752, 1e-15);
}

TEST(ArcsineRecover, ClipsSmallExcessAndRejectsLarge) {
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = cdouble(1.0 + 5e-7, 0.0);
    m(1, 0) = std::conj(m(0, 1));
    EXPECT_NEAR(arcsine_recover(m).matrix(0, 1).real(), 1.0, 1e-15);
    m(0, 1) = cdouble(0.0, -1.0 - 1e-5);
    m(1, 0) = std::conj(m(0, 1));
    EXPECT_THROW(arcsine_recover(m), EstimationError);
}

TEST(ArcsineRecover, RoundTripWithForwardMap) {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const NormalizedCovariance rbar = normalize(random_pd(8, rng));
        EXPECT_LE(max_error(arcsine_recover(arcsine_forward(rbar.matrix)).matrix, rbar.matrix), 1e-12);
    }
}

TEST(ArcsineRecover, EndToEndMonteCarlo) {
    Rng rng(8);
    const CMatrix r = random_pd(4, rng);
    const NormalizedCovariance est = arcsine_recover(sign_covariance(draw_snapshots(r, 1'000'000, 11)));
    EXPECT_LE(max_error(est.matrix, normalize(r).matrix), 1e-2);
}

TEST(Normalize, Examples) {
    CMatrix r(2, 2);
    r << 4, 2, 2, 4;
    const NormalizedCovariance n = normalize(r);
    CMatrix expected(2, 2);
    expected << 1, 0.5, 0.5, 1;
    EXPECT_LT(max_error(n.matrix, expected), 1e-15);
    ASSERT_TRUE(n.scale);
    EXPECT_LT((*n.scale - RVector::Constant(2, 2.0)).norm(), 1e-15);

    const NormalizedCovariance c = normalize(7.0 * CMatrix::Identity(3, 3));
    EXPECT_LT(max_error(c.matrix, CMatrix::Identity(3, 3)), 1e-15);
    EXPECT_LT((*c.scale - RVector::Constant(3, std::sqrt(7.0))).norm(), 1e-15);
}

TEST(Normalize, RoundTrip) {
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const CMatrix r = random_pd(8, rng);
        EXPECT_LE(linalg::rel_frobenius(denormalize(normalize(r)), r), 1e-12);
    }
}

TEST(Normalize, RejectsNonPositiveDiagonal) {
    CMatrix r = CMatrix::Identity(2, 2);
    r(1, 1) = 0.0;
    EXPECT_THROW(normalize(r), DomainError);
}

TEST(Denormalize, Examples) {
    Rng rng(10);
    const NormalizedCovariance rbar = normalize(random_pd(5, rng));
    EXPECT_LT(max_error(denormalize(rbar, RVector::Ones(5)), rbar.matrix), 1e-15);

    const NormalizedCovariance eye{CMatrix::Identity(2, 2), std::nullopt};
    RVector d(2);
    d << 2, 3;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 4;
    expected(1, 1) = 9;
    EXPECT_LT(max_error(denormalize(eye, d), expected), 1e-15);
}

TEST(Denormalize, Errors) {
    const NormalizedCovariance eye{CMatrix::Identity(2, 2), std::nullopt};
    EXPECT_THROW(denormalize(eye), DomainError);
    EXPECT_THROW(denormalize(eye, RVector::Ones(3)), DomainError);
    RVector d(2);
    d << 1.0, -1.0;
    EXPECT_THROW(denormalize(eye, d), DomainError);
}

TEST(Denormalize, FormsAgreeOnRandomInputs) {
    Rng rng(11);
    for (int n : {1, 4, 16, 32}) {
        const NormalizedCovariance rbar = normalize(random_pd(n, rng));
        const RVector d = crew::testing::random_positive(n, rng);
        const CMatrix sandwich = d.asDiagonal() * rbar.matrix * d.asDiagonal();
        const CMatrix hadamard = (d * d.transpose()).cast<cdouble>().cwiseProduct(rbar.matrix);
        EXPECT_LE(linalg::rel_frobenius(sandwich, hadamard), 1e-14);
        EXPECT_LE(linalg::rel_frobenius(denormalize(rbar, d), sandwich), 1e-14);
    }
}

TEST(Estimation, ConsistencyMoreSnapshotsHelp) {
    Rng inst(12);
    const CMatrix r = random_pd(8, inst);
    const CMatrix truth = normalize(r).matrix;
    const CMatrix factor = covariance_factor(r);
    int better = 0;
    for (int t = 0; t < 100; ++t) {
        Rng rng(1000 + t);
        const double e1 = max_error(estimate_normalized(factor, 10'000, rng).matrix, truth);
        const double e4 = max_error(estimate_normalized(factor, 40'000, rng).matrix, truth);
        better += e4 < e1 ? 1 : 0;
    }
    EXPECT_GE(better, 95);
}

TEST(Estimation, NormalizedCovarianceInvariants) {
    Rng rng(13);
    const CMatrix factor = covariance_factor(random_pd(6, rng));
    const NormalizedCovariance est = estimate_normalized(factor, 5000, rng);
    EXPECT_TRUE(linalg::is_hermitian(est.matrix));
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(est.matrix(i, i), cdouble(1.0, 0.0));
        for (int j = 0; j < 6; ++j) EXPECT_LE(std::abs(est.matrix(i, j)), std::numbers::sqrt2 + 1e-10);
    }
}

TEST(Estimation, EchoMatchesAnalyticModel) {
    ScenarioConfig sc;
    sc.n = 6;
    const Waveform s = golomb(sc.n);
    const CMatrix gamma = interference_covariance(sc);
    Rng rng(14);
    const NormalizedCovariance est =
        estimate_normalized_echo(s.values(), sc.beta, covariance_factor(gamma), 400'000, rng);
    EXPECT_LE(max_error(est.matrix, normalize(total_covariance(s, sc.beta, gamma)).matrix), 1e-2);
}
