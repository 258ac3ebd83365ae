// SPDX-License-Identifier: Apache-2.0
//
// Core value types shared by every crew module.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace crew {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// |w^H s| too small for the MSE quotient to be finite.
class DegenerateFilterError : public Error {
public:
    using Error::Error;
};

/// Matrix numerically singular even after diagonal loading.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario, sweep or jamming configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Sign-covariance estimate inconsistent with the arcsine law.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Two algebraically equivalent routes disagree; indicates a bug.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Waveform / ReceiveFilter
// ---------------------------------------------------------------------------

/// Unimodular transmit sequence s (|s_k| = 1).
class Waveform {
public:
    static constexpr double kModulusTolerance = 1e-12;

    /// Validates unimodularity; throws DomainError otherwise.
    explicit Waveform(CVector entries);

    /// Projects every entry onto the unit circle. Zero entries map to 1.
    static Waveform from_phases(const CVector& v);

    const CVector& values() const noexcept { return entries_; }
    Eigen::Index size() const noexcept { return entries_.size(); }
    cdouble operator[](Eigen::Index k) const { return entries_[k]; }

    bool operator==(const Waveform& other) const { return entries_ == other.entries_; }

private:
    CVector entries_;
};

/// Mismatched-filter coefficients w (finite, nonzero).
class ReceiveFilter {
public:
    explicit ReceiveFilter(CVector entries);

    const CVector& values() const noexcept { return entries_; }
    Eigen::Index size() const noexcept { return entries_.size(); }

    bool operator==(const ReceiveFilter& other) const { return entries_ == other.entries_; }

private:
    CVector entries_;
};

}  // namespace crew
