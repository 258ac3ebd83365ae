// SPDX-License-Identifier: Apache-2.0
//
// Recovery of unnormalized statistics from one-bit measurements.
//
// The one-bit receiver delivers Rbar (normalized echo covariance) and
// Gammabar (normalized listen-only covariance). With S = clutter_matrix(s)
// known, the scales d, a and the clutter power beta are fitted by
//
//     min  || Diag(d) Rbar Diag(d) - beta S - Diag(a) Gammabar Diag(a) ||_F^2
//     s.t. d, a, beta >= delta_floor
//
// The fit is invariant to (d, a, beta) -> (c d, c a, c^2 beta); results are
// reported in the gauge mean(a_k^2) = 1.
//
// E{R} is then rebuilt as E{d d^H} o Rbar, the surrogate whose inverse yields
// the receive filter.

#pragma once

#include "crew/onebit.hpp"
#include "crew/types.hpp"

#include <optional>
#include <vector>

namespace crew {

inline constexpr double kFitFloor = 1e-8;

struct FitInit {
    RVector d;
    RVector a;
    double beta = 1.0;
};

/// Trace-matching start: d_k = sqrt((beta0 tr S + N) / N), a_k = 1, beta = beta0.
FitInit default_fit_init(const CMatrix& s_matrix, double beta0 = 1.0);

struct FitControls {
    int sweep_cap = 500;
    double tol = 1e-8;          ///< relative objective decrease per sweep
    int block_iterations = 5;   ///< projected-gradient steps per d/a block
};

struct FitResult {
    RVector d;
    RVector a;
    double beta = 0.0;
    double residual = 0.0;           ///< final objective, in the reported gauge
    double relative_residual = 0.0;  ///< ||E||_F / ||Diag(d) Rbar Diag(d)||_F
    int iterations = 0;              ///< sweeps used
    bool converged = false;
    bool degenerate = false;         ///< S = 0: beta not identifiable
    std::vector<double> objective_trace;  ///< objective after every block update (fit gauge)
};

/// The fit objective h(d, a, beta).
double fit_objective(const NormalizedCovariance& rbar, const NormalizedCovariance& gamma_bar,
                     const CMatrix& s_matrix, const RVector& d, const RVector& a, double beta);

/// Block-coordinate descent: d-block and a-block by projected gradient with
/// Armijo backtracking, beta-block in closed form.
FitResult fit(const NormalizedCovariance& rbar, const NormalizedCovariance& gamma_bar,
              const CMatrix& s_matrix, const std::optional<FitInit>& init = std::nullopt,
              const FitControls& controls = {});

/// Running mean of d d^H with diagonal loading applied on read.
class MomentEstimate {
public:
    static constexpr double kLoading = 1e-6;

    MomentEstimate() = default;
    explicit MomentEstimate(Eigen::Index n);

    /// Raw running mean (no loading).
    const CMatrix& mean() const noexcept { return mean_; }
    long count() const noexcept { return count_; }
    /// kLoading * mean diagonal of the running mean.
    double loading() const;
    /// mean + loading * I.
    CMatrix second_moment() const;

private:
    friend MomentEstimate update_moment(MomentEstimate est, const RVector& d);
    CMatrix mean_;
    long count_ = 0;
};

MomentEstimate update_moment(MomentEstimate est, const RVector& d);

/// Sum-over-eigenpairs construction sum_k nu_k Diag(u_k) Rbar Diag(u_k)^H.
CMatrix build_Q_eigen(const CMatrix& moment, const CMatrix& rbar);

/// moment o Rbar.
CMatrix build_Q_hadamard(const CMatrix& moment, const CMatrix& rbar);

/// Hadamard form, after checking it against the eigen-sum form to 1e-10
/// relative Frobenius (ConsistencyError otherwise).
CMatrix build_Q(const CMatrix& moment, const NormalizedCovariance& rbar);
CMatrix build_Q(const MomentEstimate& est, const NormalizedCovariance& rbar);

}  // namespace crew
