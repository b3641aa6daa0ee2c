#pragma once

#include <stdexcept>
#include <string>

namespace rqm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters: a=0, coincident frame points, malformed relations.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its tolerance or hit a singularity.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DegenerateParameter : public DomainError {
public:
    using DomainError::DomainError;
};

class CoincidentPoints : public DomainError {
public:
    using DomainError::DomainError;
};

class AdmissibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

class RegionMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

class PoleEncounter : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NearParabolic : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotMarkov : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BranchMonotonicity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class JacobianInconsistent : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class Divergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MinimalityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class VanishingDerivative : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RankDrop : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class Stagnation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OutOfRange : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace rqm
