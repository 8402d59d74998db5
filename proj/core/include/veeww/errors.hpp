#pragma once

#include <stdexcept>
#include <string>

namespace veeww {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Pre- and post-selected states are orthogonal to within the overlap floor,
/// so the weak value is undefined (the amplification singularity).
class OrthogonalPrePost : public Error {
public:
    using Error::Error;
};

/// The post-selected effective decay rate is not positive: scattering from
/// the initial to the final state does not occur for these parameters.
class UnphysicalRegion : public Error {
public:
    UnphysicalRegion(const std::string& what, double threshold_epsilon)
        : Error(what), threshold_epsilon_(threshold_epsilon) {}

    /// The post-selection angle at which the mean scattering time diverges.
    double threshold_epsilon() const noexcept { return threshold_epsilon_; }

private:
    double threshold_epsilon_;
};

/// Failures of the numerical integrators and samplers.
class NumericError : public Error {
public:
    using Error::Error;
};

class StepSizeTooLarge : public NumericError {
public:
    using NumericError::NumericError;
};

class NonFiniteAmplitude : public NumericError {
public:
    using NumericError::NumericError;
};

class InsufficientSamples : public DomainError {
public:
    using DomainError::DomainError;
};

class EnvelopeViolation : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace veeww
