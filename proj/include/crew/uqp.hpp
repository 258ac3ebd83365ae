// SPDX-License-Identifier: Apache-2.0
//
// Transmit-sequence update for a fixed receive filter.
//
// For fixed w the (clutter-power normalized) MSE is the ratio
//
//     f(s) = (s^H chi s + mu) / (s^H W s),   chi = sum_{k!=0} J_k w w^H J_k^H,
//                                            W = w w^H, mu = w^H Gamma w / beta.
//
// Each Dinkelbach step freezes f* = f(s*) and decreases
// g(s) = s^H (chi - f* W) s + mu over unimodular s, which is equivalent to
// increasing s^H (lambda I - T) s. That unimodular quadratic program is
// attacked by phase-projection power iterations s <- exp(j arg(T~ s)).

#pragma once

#include "crew/onebit.hpp"
#include "crew/types.hpp"

#include <vector>

namespace crew {

struct ShiftedMatrix {
    CMatrix t;        ///< chi - f* W
    CMatrix t_tilde;  ///< lambda I - T, positive definite
    double lambda = 0.0;
};

/// mu = w^H Diag(a) Gammabar Diag(a) w / beta.
double mu_estimate(const ReceiveFilter& w, const NormalizedCovariance& gamma_bar, const RVector& a,
                   double beta);

/// T = chi - f* W and its positive-definite shift T~ = lambda I - T with
/// lambda = lambda_max(T) + 0.01 |lambda_max(T)|.
ShiftedMatrix build_T(const CMatrix& chi, const CMatrix& w_outer, double f_star);

/// exp(j arg(T~ s)); entries of T~ s with negligible modulus keep the phase
/// of s.
Waveform power_step(const CMatrix& t_tilde, const Waveform& s);

/// f(s) for the given chi, filter and mu.
double fractional_objective(const CMatrix& chi, const CVector& w, double mu, const CVector& s);

struct SStepControls {
    int outer_cap = 100;
    double outer_tol = 1e-6;
    int inner_cap = 1000;
    double inner_tol = 1e-8;
};

struct SStepResult {
    Waveform s;
    std::vector<double> objective_trace;  ///< f(s) at entry and after each accepted step
    int outer_iterations = 0;
    int inner_iterations = 0;
};

/// Dinkelbach descent on f starting from s0. f(result) <= f(s0) + 1e-12.
SStepResult dinkelbach_s_step(const ReceiveFilter& w, const Waveform& s0, double mu,
                              const SStepControls& controls = {});

}  // namespace crew
