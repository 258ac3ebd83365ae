// SPDX-License-Identifier: Apache-2.0

#include "crew/onebit.hpp"

#include "crew/linalg.hpp"
#include "crew/radar_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crew {

namespace {

constexpr Eigen::Index kChunk = 4096;
constexpr double kArcsineSlack = 1e-6;

inline double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

/// N x B block of CN(0, I) entries.
CMatrix standard_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
    CMatrix z(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(r, c) = cdouble(re, im);
        }
    }
    return z;
}

NormalizedCovariance finish(const CMatrix& acc, Eigen::Index m) {
    CMatrix r_upsilon = acc / static_cast<double>(m);
    r_upsilon = linalg::hermitian_part(r_upsilon);
    r_upsilon.diagonal().setOnes();
    return arcsine_recover(r_upsilon);
}

}  // namespace

CMatrix covariance_factor(const CMatrix& r) {
    if (r.rows() != r.cols()) {
        throw DomainError("covariance_factor: matrix must be square");
    }
    const CMatrix h = linalg::hermitian_part(r);
    if (!linalg::is_hermitian(r, 1e-10)) {
        throw DomainError("covariance_factor: matrix is not Hermitian");
    }
    Eigen::LLT<CMatrix> llt(h);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    RVector ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() < -1e-8 * top) {
        throw DomainError("covariance_factor: matrix is not positive semidefinite");
    }
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<cdouble>().asDiagonal();
}

CMatrix draw_snapshots(const CMatrix& factor, Eigen::Index m, Rng& rng) {
    if (m < 1) {
        throw DomainError("draw_snapshots: M must be >= 1");
    }
    return factor * standard_gaussian(factor.cols(), m, rng);
}

SnapshotBatch draw_snapshots(const CMatrix& r, Eigen::Index m, std::uint64_t seed) {
    Rng rng(seed);
    const CMatrix factor = covariance_factor(r);
    return SnapshotBatch{draw_snapshots(factor, m, rng), seed};
}

CVector csign(const CVector& y) {
    CVector out(y.size());
    constexpr double h = std::numbers::sqrt2 / 2.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        out[k] = cdouble(h * sign_of(y[k].real()), h * sign_of(y[k].imag()));
    }
    return out;
}

CMatrix csign(const CMatrix& y) {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    return y.unaryExpr([](const cdouble& v) {
        return cdouble(h * sign_of(v.real()), h * sign_of(v.imag()));
    });
}

CMatrix sign_covariance(const SnapshotBatch& batch) {
    if (batch.count() < 1) {
        throw DomainError("sign_covariance: empty batch");
    }
    const CMatrix u = csign(batch.samples);
    CMatrix out = u * u.adjoint() / static_cast<double>(batch.count());
    out = linalg::hermitian_part(out);
    out.diagonal().setOnes();
    return out;
}

NormalizedCovariance arcsine_recover(const CMatrix& r_upsilon) {
    if (r_upsilon.rows() != r_upsilon.cols()) {
        throw DomainError("arcsine_recover: matrix must be square");
    }
    const double limit = 1.0 + kArcsineSlack;
    CMatrix out(r_upsilon.rows(), r_upsilon.cols());
    for (Eigen::Index l = 0; l < out.cols(); ++l) {
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            const cdouble v = r_upsilon(i, l);
            if (std::abs(v.real()) > limit || std::abs(v.imag()) > limit) {
                throw EstimationError("arcsine_recover: sign covariance entry outside [-1, 1]");
            }
            const double re = std::clamp(v.real(), -1.0, 1.0);
            const double im = std::clamp(v.imag(), -1.0, 1.0);
            out(i, l) = cdouble(std::sin(0.5 * std::numbers::pi * re),
                                std::sin(0.5 * std::numbers::pi * im));
        }
    }
    out.diagonal().setOnes();
    return NormalizedCovariance{std::move(out), std::nullopt};
}

CMatrix arcsine_forward(const CMatrix& rbar) {
    return rbar.unaryExpr([](const cdouble& v) {
        const double re = std::clamp(v.real(), -1.0, 1.0);
        const double im = std::clamp(v.imag(), -1.0, 1.0);
        return cdouble(2.0 / std::numbers::pi * std::asin(re), 2.0 / std::numbers::pi * std::asin(im));
    });
}

NormalizedCovariance normalize(const CMatrix& r) {
    if (r.rows() != r.cols()) {
        throw DomainError("normalize: matrix must be square");
    }
    const auto n = r.rows();
    RVector d(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double diag = r(k, k).real();
        if (!(diag > 0.0)) {
            throw DomainError("normalize: diagonal entries must be positive");
        }
        d[k] = std::sqrt(diag);
    }
    const RVector inv = d.cwiseInverse();
    CMatrix out = inv.cast<cdouble>().asDiagonal() * r * inv.cast<cdouble>().asDiagonal();
    out.diagonal().setOnes();
    return NormalizedCovariance{std::move(out), std::move(d)};
}

CMatrix denormalize(const NormalizedCovariance& rbar, const RVector& d) {
    if (d.size() != rbar.size()) {
        throw DomainError("denormalize: scale length mismatch");
    }
    if ((d.array() <= 0.0).any() || !d.allFinite()) {
        throw DomainError("denormalize: scale must be positive");
    }
    const auto dc = d.cast<cdouble>();
    CMatrix sandwich = dc.asDiagonal() * rbar.matrix * dc.asDiagonal();
    const CMatrix hadamard = (d * d.transpose()).cast<cdouble>().cwiseProduct(rbar.matrix);
    if (linalg::rel_frobenius(hadamard, sandwich) > 1e-12) {
        throw ConsistencyError("denormalize: diagonal and Hadamard forms disagree");
    }
    return sandwich;
}

CMatrix denormalize(const NormalizedCovariance& rbar) {
    if (!rbar.scale) {
        throw DomainError("denormalize: scale vector unknown");
    }
    return denormalize(rbar, *rbar.scale);
}

NormalizedCovariance estimate_normalized(const CMatrix& factor, Eigen::Index m, Rng& rng) {
    if (m < 1) {
        throw DomainError("estimate_normalized: M must be >= 1");
    }
    const auto n = factor.rows();
    CMatrix acc = CMatrix::Zero(n, n);
    for (Eigen::Index done = 0; done < m;) {
        const Eigen::Index b = std::min(kChunk, m - done);
        const CMatrix u = csign(draw_snapshots(factor, b, rng));
        acc.noalias() += u * u.adjoint();
        done += b;
    }
    return finish(acc, m);
}

NormalizedCovariance estimate_normalized_echo(const CVector& s, double beta,
                                              const CMatrix& gamma_factor, Eigen::Index m,
                                              Rng& rng) {
    if (m < 1) {
        throw DomainError("estimate_normalized_echo: M must be >= 1");
    }
    if (!(beta >= 0.0)) {
        throw DomainError("estimate_normalized_echo: beta must be nonnegative");
    }
    const auto n = s.size();
    // Columns J_k s for k != 0: the clutter part of the range-cell model.
    const Eigen::Index cells = 2 * n - 2;
    CMatrix shifted(n, cells);
    Eigen::Index col = 0;
    for (int k = 1; k < n; ++k) {
        shifted.col(col++) = shift(s, k);
        shifted.col(col++) = shift(s, -k);
    }
    const double amp = std::sqrt(beta);
    CMatrix acc = CMatrix::Zero(n, n);
    for (Eigen::Index done = 0; done < m;) {
        const Eigen::Index b = std::min(kChunk, m - done);
        CMatrix y = draw_snapshots(gamma_factor, b, rng);
        if (cells > 0) {
            y.noalias() += amp * shifted * standard_gaussian(cells, b, rng);
        }
        const CMatrix u = csign(y);
        acc.noalias() += u * u.adjoint();
        done += b;
    }
    return finish(acc, m);
}

}  // namespace crew
