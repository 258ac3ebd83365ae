// SPDX-License-Identifier: Apache-2.0
//
// Random instance generators shared by the test binaries.

#pragma once

#include "crew/onebit.hpp"
#include "crew/types.hpp"

#include <numbers>
#include <random>

namespace crew::testing {

inline CVector random_phases(Eigen::Index n, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    CVector v(n);
    for (auto& x : v) {
        x = std::polar(1.0, u(rng));
    }
    return v;
}

inline Waveform random_waveform(Eigen::Index n, Rng& rng) { return Waveform(random_phases(n, rng)); }

inline CVector random_gaussian(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(n);
    for (auto& x : v) {
        const double re = g(rng);
        x = cdouble(re, g(rng));
    }
    return v;
}

inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        m.col(j) = random_gaussian(rows, rng);
    }
    return m;
}

/// G G^H / N + floor * I.
inline CMatrix random_pd(Eigen::Index n, Rng& rng, double floor = 0.1) {
    const CMatrix g = random_gaussian(n, n, rng);
    CMatrix r = g * g.adjoint() / static_cast<double>(n);
    r.diagonal().array() += floor;
    return r;
}

inline RVector random_positive(Eigen::Index n, Rng& rng, double lo = 0.5, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    RVector v(n);
    for (auto& x : v) {
        x = u(rng);
    }
    return v;
}

/// Explicit N x N shift matrix J_k.
inline CMatrix shift_matrix(Eigen::Index n, int k) {
    CMatrix j = CMatrix::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index r = c + k;
        if (r >= 0 && r < n) {
            j(r, c) = 1.0;
        }
    }
    return j;
}

}  // namespace crew::testing
