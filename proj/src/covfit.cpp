// SPDX-License-Identifier: Apache-2.0

#include "crew/covfit.hpp"

#include "crew/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace crew {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-300;

CMatrix scaled(const CMatrix& m, const RVector& x) {
    return (x * x.transpose()).cast<cdouble>().cwiseProduct(m);
}

struct Problem {
    const CMatrix& rbar;
    const CMatrix& gbar;
    const CMatrix& s;

    CMatrix residual(const RVector& d, const RVector& a, double beta) const {
        return scaled(rbar, d) - beta * s - scaled(gbar, a);
    }
    double objective(const RVector& d, const RVector& a, double beta) const {
        return residual(d, a, beta).squaredNorm();
    }
};

/// 4 Re[(conj(E) o M) x]
RVector scale_gradient(const CMatrix& e, const CMatrix& m, const RVector& x) {
    const Eigen::MatrixXd weights = (e.conjugate().cwiseProduct(m)).real();
    return 4.0 * weights * x;
}

/// Gauss-Newton diagonal of h w.r.t. the scale x of M: the residual is
/// linear in x_i with coefficients x_l M_il off the diagonal (counted twice
/// by symmetry) and 2 x_i on it.
RVector jacobi_scaling(const CMatrix& m, const RVector& x) {
    const Eigen::MatrixXd mag2 = m.cwiseAbs2();
    RVector h = 4.0 * (mag2 * x.cwiseAbs2());  // includes 4 x_i^2 for the unit diagonal
    h += 4.0 * x.cwiseAbs2();
    return h.cwiseMax(1e-300);
}

/// Diagonally scaled projected-gradient steps on one scale block.
template <class Eval, class Grad>
double pg_block(RVector& x, double h, double& step, int iterations, const CMatrix& m, Eval&& eval,
                Grad&& grad, std::vector<double>& trace) {
    for (int it = 0; it < iterations; ++it) {
        const RVector grad_raw = grad(x);
        const RVector g = grad_raw.cwiseQuotient(jacobi_scaling(m, x));
        if (g.squaredNorm() == 0.0) {
            break;
        }
        double t = 2.0 * step;
        bool accepted = false;
        while (t > kMinStep) {
            RVector cand = (x - t * g).cwiseMax(kFitFloor);
            const double predicted = grad_raw.dot(cand - x);
            if (predicted >= 0.0) {
                break;  // projected step does not descend
            }
            const double hc = eval(cand);
            if (hc <= h + kArmijo * predicted) {
                x = std::move(cand);
                h = hc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            break;
        }
        step = t;
        trace.push_back(h);
    }
    return h;
}

/// One damped Gauss-Newton (Levenberg-Marquardt) step on (d, a, beta)
/// jointly, projected onto the floor. Accepted only if h decreases; the
/// damping adapts across calls.
struct JointStep {
    double damping = 1e-3;

    bool operator()(const Problem& p, RVector& d, RVector& a, double& beta, double& h, bool fit_beta) {
        const auto n = d.size();
        const Eigen::Index dim = 2 * n + 1;
        const CMatrix e = p.residual(d, a, beta);
        Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(dim, dim);
        RVector jtr = RVector::Zero(dim);

        std::array<Eigen::Index, 5> idx{};
        std::array<cdouble, 5> val{};
        for (Eigen::Index l = 0; l < n; ++l) {
            for (Eigen::Index i = 0; i < n; ++i) {
                int k = 0;
                if (i == l) {
                    idx[k] = i;
                    val[k++] = 2.0 * d[i] * p.rbar(i, i);
                    idx[k] = n + i;
                    val[k++] = -2.0 * a[i] * p.gbar(i, i);
                } else {
                    idx[k] = i;
                    val[k++] = d[l] * p.rbar(i, l);
                    idx[k] = l;
                    val[k++] = d[i] * p.rbar(i, l);
                    idx[k] = n + i;
                    val[k++] = -a[l] * p.gbar(i, l);
                    idx[k] = n + l;
                    val[k++] = -a[i] * p.gbar(i, l);
                }
                if (fit_beta) {
                    idx[k] = 2 * n;
                    val[k++] = -p.s(i, l);
                }
                for (int u = 0; u < k; ++u) {
                    jtr[idx[u]] += std::real(std::conj(val[u]) * e(i, l));
                    for (int v = 0; v < k; ++v) {
                        jtj(idx[u], idx[v]) += std::real(val[u] * std::conj(val[v]));
                    }
                }
            }
        }
        if (!fit_beta) {
            jtj(2 * n, 2 * n) = 1.0;
        }

        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::MatrixXd lhs = jtj;
            lhs.diagonal() += damping * jtj.diagonal().cwiseMax(1e-300);
            const RVector delta = lhs.ldlt().solve(-jtr);
            if (!delta.allFinite()) {
                damping *= 10.0;
                continue;
            }
            const RVector d_new = (d + delta.head(n)).cwiseMax(kFitFloor);
            const RVector a_new = (a + delta.segment(n, n)).cwiseMax(kFitFloor);
            const double b_new = fit_beta ? std::max(beta + delta[2 * n], kFitFloor) : beta;
            const double h_new = p.objective(d_new, a_new, b_new);
            if (h_new < h) {
                d = d_new;
                a = a_new;
                beta = b_new;
                h = h_new;
                damping = std::max(damping / 3.0, 1e-12);
                return true;
            }
            damping *= 10.0;
        }
        return false;
    }
};

}  // namespace

FitInit default_fit_init(const CMatrix& s_matrix, double beta0) {
    const auto n = s_matrix.rows();
    const double sigma = (beta0 * std::real(s_matrix.trace()) + static_cast<double>(n)) /
                         static_cast<double>(n);
    return FitInit{RVector::Constant(n, std::sqrt(std::max(sigma, kFitFloor))), RVector::Ones(n),
                   std::max(beta0, kFitFloor)};
}

double fit_objective(const NormalizedCovariance& rbar, const NormalizedCovariance& gamma_bar,
                     const CMatrix& s_matrix, const RVector& d, const RVector& a, double beta) {
    const Problem p{rbar.matrix, gamma_bar.matrix, s_matrix};
    return p.objective(d, a, beta);
}

FitResult fit(const NormalizedCovariance& rbar, const NormalizedCovariance& gamma_bar,
              const CMatrix& s_matrix, const std::optional<FitInit>& init,
              const FitControls& controls) {
    const auto n = rbar.size();
    if (gamma_bar.size() != n || s_matrix.rows() != n || s_matrix.cols() != n) {
        throw DomainError("fit: dimension mismatch");
    }
    const Problem p{rbar.matrix, gamma_bar.matrix, s_matrix};
    FitInit start = init ? *init : default_fit_init(s_matrix);
    if (start.d.size() != n || start.a.size() != n) {
        throw DomainError("fit: initial scale length mismatch");
    }

    FitResult out;
    RVector d = start.d.cwiseMax(kFitFloor);
    RVector a = start.a.cwiseMax(kFitFloor);
    double beta = std::max(start.beta, kFitFloor);
    const double s_norm2 = s_matrix.squaredNorm();
    out.degenerate = s_norm2 == 0.0;

    double h = p.objective(d, a, beta);
    out.objective_trace.push_back(h);
    double step_d = 1.0;
    double step_a = 1.0;
    JointStep joint;

    for (int sweep = 0; sweep < controls.sweep_cap; ++sweep) {
        const double h_before = h;

        h = pg_block(
            d, h, step_d, controls.block_iterations, p.rbar,
            [&](const RVector& x) { return p.objective(x, a, beta); },
            [&](const RVector& x) { return scale_gradient(p.residual(x, a, beta), p.rbar, x); },
            out.objective_trace);

        h = pg_block(
            a, h, step_a, controls.block_iterations, p.gbar,
            [&](const RVector& x) { return p.objective(d, x, beta); },
            [&](const RVector& x) { return RVector(-scale_gradient(p.residual(d, x, beta), p.gbar, x)); },
            out.objective_trace);

        if (!out.degenerate) {
            const CMatrix target = scaled(p.rbar, d) - scaled(p.gbar, a);
            const double b = std::max(kFitFloor, std::real((p.s.adjoint() * target).trace()) / s_norm2);
            const double hb = p.objective(d, a, b);
            if (hb <= h) {
                beta = b;
                h = hb;
            }
            out.objective_trace.push_back(h);
        }

        if (joint(p, d, a, beta, h, !out.degenerate)) {
            out.objective_trace.push_back(h);
        }

        out.iterations = sweep + 1;
        const double scale = scaled(p.rbar, d).squaredNorm();
        if (h <= 1e-24 * scale) {
            out.converged = true;
            break;
        }
        if (h_before > 0.0 && (h_before - h) / h_before < controls.tol) {
            out.converged = true;
            break;
        }
    }

    // Report in the gauge mean(a^2) = 1.
    const double gauge = a.squaredNorm() / static_cast<double>(n);
    if (gauge > 0.0) {
        const double c = 1.0 / std::sqrt(gauge);
        d = (c * d).cwiseMax(kFitFloor);
        a = (c * a).cwiseMax(kFitFloor);
        beta = std::max(beta * c * c, kFitFloor);
    }
    out.d = d;
    out.a = a;
    out.beta = beta;
    out.residual = p.objective(d, a, beta);
    const double ref = scaled(p.rbar, d).norm();
    out.relative_residual = ref > 0.0 ? std::sqrt(out.residual) / ref : std::sqrt(out.residual);
    return out;
}

MomentEstimate::MomentEstimate(Eigen::Index n) : mean_(CMatrix::Zero(n, n)) {}

double MomentEstimate::loading() const {
    if (mean_.size() == 0) {
        return 0.0;
    }
    return kLoading * std::real(mean_.trace()) / static_cast<double>(mean_.rows());
}

CMatrix MomentEstimate::second_moment() const {
    CMatrix out = mean_;
    out.diagonal().array() += loading();
    return out;
}

MomentEstimate update_moment(MomentEstimate est, const RVector& d) {
    if (est.count_ == 0 && est.mean_.size() == 0) {
        est.mean_ = CMatrix::Zero(d.size(), d.size());
    }
    if (d.size() != est.mean_.rows()) {
        throw DomainError("update_moment: length mismatch");
    }
    ++est.count_;
    const CMatrix sample = (d * d.transpose()).cast<cdouble>();
    est.mean_ += (sample - est.mean_) / static_cast<double>(est.count_);
    return est;
}

CMatrix build_Q_eigen(const CMatrix& moment, const CMatrix& rbar) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(moment));
    const auto& nu = es.eigenvalues();
    const auto& u = es.eigenvectors();
    CMatrix q = CMatrix::Zero(rbar.rows(), rbar.cols());
    for (Eigen::Index k = 0; k < nu.size(); ++k) {
        const CVector uk = u.col(k);
        q.noalias() += nu[k] * (uk.asDiagonal() * rbar * uk.conjugate().asDiagonal());
    }
    return q;
}

CMatrix build_Q_hadamard(const CMatrix& moment, const CMatrix& rbar) {
    return moment.cwiseProduct(rbar);
}

CMatrix build_Q(const CMatrix& moment, const NormalizedCovariance& rbar) {
    if (moment.rows() != rbar.size() || moment.cols() != rbar.size()) {
        throw DomainError("build_Q: dimension mismatch");
    }
    const CMatrix hadamard = build_Q_hadamard(moment, rbar.matrix);
    const CMatrix eigen_sum = build_Q_eigen(moment, rbar.matrix);
    if (linalg::rel_frobenius(eigen_sum, hadamard) > 1e-10) {
        throw ConsistencyError("build_Q: eigen-sum and Hadamard constructions disagree");
    }
    return hadamard;
}

CMatrix build_Q(const MomentEstimate& est, const NormalizedCovariance& rbar) {
    if (est.count() == 0) {
        throw DomainError("build_Q: empty moment estimate");
    }
    return build_Q(est.second_moment(), rbar);
}

}  // namespace crew
