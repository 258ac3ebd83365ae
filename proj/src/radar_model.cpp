// SPDX-License-Identifier: Apache-2.0

#include "crew/radar_model.hpp"

#include "crew/linalg.hpp"

#include <cmath>
#include <numbers>

namespace crew {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    if (n < 1) {
        throw ConfigError("N must be >= 1");
    }
    require_positive(beta, "beta");
    require_positive(sigma2, "sigma2");
    if (!(sigmaJ2 >= 0.0) || !std::isfinite(sigmaJ2)) {
        throw ConfigError("sigmaJ2 must be nonnegative and finite");
    }
    if (snapshots < 1) {
        throw ConfigError("snapshots must be >= 1");
    }
    std::visit(overloaded{
                   [](const NoJamming&) {},
                   [](const SpotJamming& j) {
                       if (!(j.f0 >= 0.0 && j.f0 < 1.0)) {
                           throw ConfigError("spot jamming requires 0 <= f0 < 1");
                       }
                   },
                   [](const BarrageJamming& j) {
                       if (!(j.f1 >= 0.0 && j.f1 < j.f2 && j.f2 < 1.0)) {
                           throw ConfigError("barrage jamming requires 0 <= f1 < f2 < 1");
                       }
                   },
               },
               jamming);
    const auto& c = controls;
    if (c.s_outer_cap < 1 || c.s_inner_cap < 1 || c.fit_sweep_cap < 1 || c.design_cap < 1 ||
        c.can_cap < 1) {
        throw ConfigError("iteration caps must be >= 1");
    }
    require_positive(c.s_outer_tol, "s_outer_tol");
    require_positive(c.s_inner_tol, "s_inner_tol");
    require_positive(c.fit_tol, "fit_tol");
    require_positive(c.design_eps, "design_eps");
    require_positive(c.can_tol, "can_tol");
}

std::string jamming_name(const Jamming& j) {
    return std::visit(overloaded{
                          [](const NoJamming&) { return std::string("none"); },
                          [](const SpotJamming&) { return std::string("spot"); },
                          [](const BarrageJamming&) { return std::string("barrage"); },
                      },
                      j);
}

CVector shift(const CVector& v, int k) {
    const auto n = v.size();
    if (std::abs(static_cast<long long>(k)) >= n) {
        throw DomainError("shift: |k| must be < N");
    }
    CVector out = CVector::Zero(n);
    if (k >= 0) {
        out.tail(n - k) = v.head(n - k);
    } else {
        const auto m = static_cast<Eigen::Index>(-k);
        out.head(n - m) = v.tail(n - m);
    }
    return out;
}

CVector autocorrelation(const CVector& x) {
    const auto n = x.size();
    CVector r(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        // sum_k x_{k+m} conj(x_k)
        r[m] = x.head(n - m).dot(x.tail(n - m));
    }
    return r;
}

CMatrix clutter_matrix(const CVector& x) {
    const auto n = x.size();
    if (n < 1) {
        throw DomainError("clutter_matrix: empty vector");
    }
    const CVector r = autocorrelation(x);
    CMatrix out(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const cdouble toeplitz = i >= l ? r[i - l] : std::conj(r[l - i]);
            out(i, l) = toeplitz - x[i] * std::conj(x[l]);
        }
    }
    return out;
}

CMatrix total_covariance(const Waveform& s, double beta, const CMatrix& gamma) {
    if (gamma.rows() != s.size() || gamma.cols() != s.size()) {
        throw DomainError("total_covariance: dimension mismatch");
    }
    return beta * clutter_matrix(s.values()) + gamma;
}

double mse(const CVector& w, const CVector& s, const CMatrix& r) {
    if (w.size() != s.size() || r.rows() != s.size() || r.cols() != s.size()) {
        throw DomainError("mse: dimension mismatch");
    }
    const cdouble gain = w.dot(s);  // w^H s
    if (std::abs(gain) <= 1e-12 * w.norm() * s.norm()) {
        throw DegenerateFilterError("mse: |w^H s| is numerically zero");
    }
    const double num = std::real(w.dot(r * w));
    return num / std::norm(gain);
}

double mse(const ReceiveFilter& w, const Waveform& s, const CMatrix& r) {
    return mse(w.values(), s.values(), r);
}

ReceiveFilter mmf(const CMatrix& r, const Waveform& s) {
    const auto n = s.size();
    if (r.rows() != n || r.cols() != n) {
        throw DomainError("mmf: dimension mismatch");
    }
    CMatrix loaded = linalg::hermitian_part(r);
    const auto range = linalg::eigen_range(loaded);
    if (!(range.max > 0.0)) {
        throw ConditioningError("mmf: covariance has no positive eigenvalue");
    }
    if (range.min < kConditionFloor * range.max) {
        const double eps = kConditionFloor * std::real(loaded.trace()) / static_cast<double>(n);
        loaded.diagonal().array() += eps;
    }
    Eigen::LLT<CMatrix> llt(loaded);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("mmf: covariance is not positive definite after loading");
    }
    CVector w = llt.solve(s.values());
    if (!w.allFinite()) {
        throw ConditioningError("mmf: non-finite filter");
    }
    return ReceiveFilter(std::move(w));
}

RVector jamming_spectrum(const ScenarioConfig& scenario) {
    const int n = scenario.n;
    if (n < 1) {
        throw ConfigError("jamming_spectrum: N must be >= 1");
    }
    const Eigen::Index grid = 2 * static_cast<Eigen::Index>(n) - 1;
    RVector eta = RVector::Zero(grid);
    std::visit(overloaded{
                   [](const NoJamming&) {},
                   [&](const SpotJamming& j) {
                       if (!(j.f0 >= 0.0 && j.f0 < 1.0)) {
                           throw ConfigError("spot jamming requires 0 <= f0 < 1");
                       }
                       // nearest grid point on the unit circle of frequencies
                       auto p = static_cast<Eigen::Index>(std::llround(j.f0 * static_cast<double>(grid)));
                       eta[p % grid] = 1.0;
                   },
                   [&](const BarrageJamming& j) {
                       if (!(j.f1 >= 0.0 && j.f1 < j.f2 && j.f2 < 1.0)) {
                           throw ConfigError("barrage jamming requires 0 <= f1 < f2 < 1");
                       }
                       constexpr double slack = 1e-12;
                       Eigen::Index hits = 0;
                       for (Eigen::Index p = 0; p < grid; ++p) {
                           const double f = static_cast<double>(p) / static_cast<double>(grid);
                           if (f >= j.f1 - slack && f <= j.f2 + slack) {
                               eta[p] = 1.0;
                               ++hits;
                           }
                       }
                       if (hits == 0) {
                           throw ConfigError("barrage band contains no frequency grid point");
                       }
                       eta /= static_cast<double>(hits);
                   },
               },
               scenario.jamming);
    return eta;
}

CMatrix jamming_covariance(const RVector& eta) {
    const Eigen::Index grid = eta.size();
    if (grid < 1 || grid % 2 == 0) {
        throw DomainError("jamming_covariance: spectrum length must be 2N-1");
    }
    if ((eta.array() < 0.0).any() || !eta.allFinite()) {
        throw DomainError("jamming_covariance: spectrum must be nonnegative");
    }
    const Eigen::Index n = (grid + 1) / 2;
    // gamma_m for m = 0..N-1; gamma_{-m} = conj(gamma_m) since eta is real.
    CVector gamma(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        cdouble acc{0.0, 0.0};
        for (Eigen::Index p = 0; p < grid; ++p) {
            if (eta[p] == 0.0) {
                continue;
            }
            const auto phase_index = (p * m) % grid;
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(phase_index) /
                                 static_cast<double>(grid);
            acc += eta[p] * std::polar(1.0, phase);
        }
        gamma[m] = acc / static_cast<double>(grid);
    }
    CMatrix out(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index k = 0; k < n; ++k) {
            out(k, l) = k >= l ? gamma[k - l] : std::conj(gamma[l - k]);
        }
    }
    if (n > 1 && linalg::eigen_range(out).min < -1e-12) {
        out = linalg::repair_psd(out);
    }
    return out;
}

CMatrix interference_covariance(const ScenarioConfig& scenario) {
    scenario.validate();
    const auto n = static_cast<Eigen::Index>(scenario.n);
    CMatrix gamma = scenario.sigma2 * CMatrix::Identity(n, n);
    if (scenario.sigmaJ2 > 0.0 && !std::holds_alternative<NoJamming>(scenario.jamming)) {
        gamma += scenario.sigmaJ2 * jamming_covariance(jamming_spectrum(scenario));
    }
    return gamma;
}

Waveform golomb(int n) {
    if (n < 1) {
        throw DomainError("golomb: N must be >= 1");
    }
    CVector s(n);
    const long long period = 2LL * n;
    for (long long k = 1; k <= n; ++k) {
        // exp(j pi k(k-1)/N) has period 2N in k(k-1)
        const long long e = (k * (k - 1)) % period;
        s[k - 1] = std::polar(1.0, std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
    }
    return Waveform::from_phases(s);
}

double isl(const Waveform& s) {
    const CVector r = autocorrelation(s.values());
    double acc = 0.0;
    for (Eigen::Index m = 1; m < r.size(); ++m) {
        acc += std::norm(r[m]);
    }
    return 2.0 * acc;
}

}  // namespace crew
