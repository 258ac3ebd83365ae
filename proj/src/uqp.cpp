// SPDX-License-Identifier: Apache-2.0

#include "crew/uqp.hpp"

#include "crew/linalg.hpp"
#include "crew/radar_model.hpp"

#include <cmath>

namespace crew {

double mu_estimate(const ReceiveFilter& w, const NormalizedCovariance& gamma_bar, const RVector& a,
                   double beta) {
    if (!(beta > 0.0)) {
        throw DomainError("mu_estimate: beta must be positive");
    }
    if (a.size() != w.size() || gamma_bar.size() != w.size()) {
        throw DomainError("mu_estimate: dimension mismatch");
    }
    if ((a.array() <= 0.0).any()) {
        throw DomainError("mu_estimate: scale must be positive");
    }
    const CVector aw = a.cast<cdouble>().cwiseProduct(w.values());
    return std::real(aw.dot(gamma_bar.matrix * aw)) / beta;
}

ShiftedMatrix build_T(const CMatrix& chi, const CMatrix& w_outer, double f_star) {
    if (chi.rows() != chi.cols() || chi.rows() != w_outer.rows() || w_outer.rows() != w_outer.cols()) {
        throw DomainError("build_T: dimension mismatch");
    }
    ShiftedMatrix out;
    out.t = chi - f_star * w_outer;
    const double top = linalg::eigen_range(out.t).max;
    const double floor = 1e-12 * std::max(out.t.norm(), 1e-300);
    out.lambda = top + 0.01 * std::max(std::abs(top), floor);
    out.t_tilde = -out.t;
    out.t_tilde.diagonal().array() += out.lambda;
    return out;
}

namespace {

CVector phase_project(const CVector& v, const CVector& previous) {
    const double scale = v.cwiseAbs().maxCoeff();
    CVector out(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]);
        out[k] = mag > 1e-14 * scale && mag > 0.0 ? v[k] / mag : previous[k];
    }
    return out;
}

double quad(const CMatrix& m, const CVector& s) { return std::real(s.dot(m * s)); }

}  // namespace

Waveform power_step(const CMatrix& t_tilde, const Waveform& s) {
    if (t_tilde.rows() != s.size() || t_tilde.cols() != s.size()) {
        throw DomainError("power_step: dimension mismatch");
    }
    return Waveform::from_phases(phase_project(t_tilde * s.values(), s.values()));
}

double fractional_objective(const CMatrix& chi, const CVector& w, double mu, const CVector& s) {
    const double num = quad(chi, s) + mu;
    const double den = std::norm(w.dot(s));
    if (den <= 1e-14 * w.squaredNorm() * static_cast<double>(s.size())) {
        throw DegenerateFilterError("s-step: s^H W s is numerically zero");
    }
    return num / den;
}

SStepResult dinkelbach_s_step(const ReceiveFilter& w, const Waveform& s0, double mu,
                              const SStepControls& controls) {
    if (w.size() != s0.size()) {
        throw DomainError("dinkelbach_s_step: dimension mismatch");
    }
    if (!(mu >= 0.0)) {
        throw DomainError("dinkelbach_s_step: mu must be nonnegative");
    }
    const CVector& wv = w.values();
    const CMatrix chi = clutter_matrix(wv);
    const CMatrix w_outer = wv * wv.adjoint();

    SStepResult result{s0, {}, 0, 0};
    double f = fractional_objective(chi, wv, mu, s0.values());
    result.objective_trace.push_back(f);

    for (int outer = 0; outer < controls.outer_cap; ++outer) {
        const ShiftedMatrix shifted = build_T(chi, w_outer, f);
        CVector s = result.s.values();
        double q = quad(shifted.t_tilde, s);
        for (int inner = 0; inner < controls.inner_cap; ++inner) {
            CVector next = phase_project(shifted.t_tilde * s, s);
            const double q_next = quad(shifted.t_tilde, next);
            ++result.inner_iterations;
            const double gain = (q_next - q) / std::max(std::abs(q), 1e-300);
            s = std::move(next);
            q = q_next;
            if (gain < controls.inner_tol) {
                break;
            }
        }
        ++result.outer_iterations;
        const double f_next = fractional_objective(chi, wv, mu, s);
        if (!(f_next < f)) {
            break;  // no strict descent; keep the current iterate
        }
        result.s = Waveform::from_phases(s);
        result.objective_trace.push_back(f_next);
        const double rel = f > 0.0 ? (f - f_next) / f : 0.0;
        f = f_next;
        if (rel < controls.outer_tol) {
            break;
        }
    }
    return result;
}

}  // namespace crew
