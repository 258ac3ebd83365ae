// SPDX-License-Identifier: Apache-2.0

#include "crew/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace crew {

Waveform::Waveform(CVector entries) : entries_(std::move(entries)) {
    if (entries_.size() < 1) {
        throw DomainError("waveform: length must be >= 1");
    }
    for (Eigen::Index k = 0; k < entries_.size(); ++k) {
        if (std::abs(std::abs(entries_[k]) - 1.0) > kModulusTolerance) {
            throw DomainError("waveform: entry " + std::to_string(k) + " is not unimodular");
        }
    }
}

Waveform Waveform::from_phases(const CVector& v) {
    CVector out(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]);
        out[k] = mag > 0.0 ? v[k] / mag : cdouble(1.0, 0.0);
    }
    return Waveform(std::move(out));
}

ReceiveFilter::ReceiveFilter(CVector entries) : entries_(std::move(entries)) {
    if (entries_.size() < 1) {
        throw DomainError("receive filter: length must be >= 1");
    }
    if (!entries_.allFinite()) {
        throw DomainError("receive filter: non-finite coefficient");
    }
    if (entries_.norm() <= 0.0) {
        throw DomainError("receive filter: zero vector");
    }
}

namespace linalg {

bool is_hermitian(const CMatrix& m, double rel_tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const double scale = std::max(m.norm(), 1e-300);
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool is_psd(const CMatrix& m, double rel_tol) {
    if (!is_hermitian(m)) {
        return false;
    }
    const auto r = eigen_range(m);
    return r.min >= -rel_tol * std::max(r.max, 0.0);
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

EigenRange eigen_range(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

CMatrix repair_psd(const CMatrix& m, double clip_tol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    RVector ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() >= 0.0) {
        return hermitian_part(m);
    }
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (ev[k] < 0.0) {
            if (-ev[k] > clip_tol * top && -ev[k] > 1e-300) {
                throw DomainError("matrix is not positive semidefinite");
            }
            ev[k] = 0.0;
        }
    }
    const CMatrix& u = es.eigenvectors();
    return u * ev.cast<cdouble>().asDiagonal() * u.adjoint();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double rel_frobenius(const CMatrix& a, const CMatrix& b) {
    const double ref = b.norm();
    const double diff = (a - b).norm();
    return ref > 0.0 ? diff / ref : diff;
}

}  // namespace linalg
}  // namespace crew
