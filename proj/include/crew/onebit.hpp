// SPDX-License-Identifier: Apache-2.0
//
// One-bit receiver simulation and normalized covariance recovery.
//
// A complex one-bit ADC keeps only the signs of the in-phase and quadrature
// components, so the covariance of the quantized data only determines the
// correlation coefficients of the underlying Gaussian process:
//
//     Rbar = sin(pi/2 * Re R_u) + j sin(pi/2 * Im R_u)
//
// where R_u is the covariance of u = csign(y) / sqrt(2). The per-channel
// powers (the scale vector d, R = Diag(d) Rbar Diag(d)) are lost.

#pragma once

#include "crew/types.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace crew {

using Rng = std::mt19937_64;

/// Unit-diagonal Hermitian matrix with an optional positive scale vector.
struct NormalizedCovariance {
    CMatrix matrix;
    std::optional<RVector> scale;

    Eigen::Index size() const noexcept { return matrix.rows(); }
};

/// M snapshots stored column-wise (N x M).
struct SnapshotBatch {
    CMatrix samples;
    std::uint64_t seed = 0;

    Eigen::Index length() const noexcept { return samples.rows(); }
    Eigen::Index count() const noexcept { return samples.cols(); }
};

/// Factor L with L L^H = R (Cholesky, eigenvalue fallback for singular R).
/// Throws DomainError when R is not PSD.
CMatrix covariance_factor(const CMatrix& r);

/// M circularly-symmetric complex Gaussian vectors with covariance R.
SnapshotBatch draw_snapshots(const CMatrix& r, Eigen::Index m, std::uint64_t seed);
CMatrix draw_snapshots(const CMatrix& factor, Eigen::Index m, Rng& rng);

/// (sign(Re y) + j sign(Im y)) / sqrt(2), with sign(0) = +1.
CVector csign(const CVector& y);
CMatrix csign(const CMatrix& y);

/// (1/M) sum_m u_m u_m^H, u_m = csign(y_m). Unit diagonal.
CMatrix sign_covariance(const SnapshotBatch& batch);

/// Elementwise arcsine-law inversion; diagonal pinned to 1, scale unset.
/// Throws EstimationError if any real or imaginary part exceeds 1 + 1e-6
/// in magnitude.
NormalizedCovariance arcsine_recover(const CMatrix& r_upsilon);

/// Forward map (2/pi) arcsin applied separately to real and imaginary parts.
CMatrix arcsine_forward(const CMatrix& rbar);

/// D^{-1/2} R D^{-1/2} with D = R o I; scale d_k = sqrt(R_kk).
NormalizedCovariance normalize(const CMatrix& r);

/// Diag(d) Rbar Diag(d). Also evaluates (d d^H) o Rbar and throws
/// ConsistencyError if the two disagree beyond 1e-12 relative.
CMatrix denormalize(const NormalizedCovariance& rbar, const RVector& d);
CMatrix denormalize(const NormalizedCovariance& rbar);

/// Streams `m` snapshots with covariance L L^H through the one-bit
/// quantizer in bounded-memory chunks and returns the recovered Rbar.
NormalizedCovariance estimate_normalized(const CMatrix& factor, Eigen::Index m, Rng& rng);

/// Same, for echoes y = sum_{k != 0} alpha_k J_k s + eps with
/// alpha_k ~ CN(0, beta) and eps ~ CN(0, Gamma) (gamma_factor = chol(Gamma)).
NormalizedCovariance estimate_normalized_echo(const CVector& s, double beta,
                                              const CMatrix& gamma_factor, Eigen::Index m,
                                              Rng& rng);

}  // namespace crew
