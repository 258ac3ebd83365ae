// SPDX-License-Identifier: Apache-2.0
//
// Small dense Hermitian helpers used across modules.

#pragma once

#include "crew/types.hpp"

namespace crew::linalg {

/// max |M - M^H| <= tol * ||M||_F (absolute tol when M = 0).
bool is_hermitian(const CMatrix& m, double rel_tol = 1e-10);

/// Hermitian and lambda_min >= -rel_tol * max(lambda_max, 0).
bool is_psd(const CMatrix& m, double rel_tol = 1e-8);

/// (M + M^H) / 2.
CMatrix hermitian_part(const CMatrix& m);

struct EigenRange {
    double min;
    double max;
};

/// Extreme eigenvalues of a Hermitian matrix (dense eigensolve).
EigenRange eigen_range(const CMatrix& m);

/// Clips negative eigenvalues whose magnitude is at most
/// `clip_tol * lambda_max`; throws DomainError if a larger negative
/// eigenvalue is present.
CMatrix repair_psd(const CMatrix& m, double clip_tol = 1e-12);

/// max_{i,l} |A_il - B_il|.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// ||A - B||_F / ||B||_F (absolute when B = 0).
double rel_frobenius(const CMatrix& a, const CMatrix& b);

}  // namespace crew::linalg
