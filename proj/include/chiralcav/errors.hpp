#pragma once

#include <stdexcept>
#include <string>

namespace chiralcav {

/// Root of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, quantum numbers or configuration.
/// The CLI maps these to exit status 2.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// A numerical procedure failed. The CLI maps these to exit status 3.
class NumericalError : public Error
{
public:
    using Error::Error;
};

class InvalidParameter : public ConfigError
{
public:
    using ConfigError::ConfigError;
};

class InvalidQuantumNumbers : public ConfigError
{
public:
    using ConfigError::ConfigError;
};

class NonHydrogenicCutoffs : public ConfigError
{
public:
    using ConfigError::ConfigError;
};

class NoConvergence : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class GridTooSmall : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class SingularIntegrand : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class ExtrapolationUnstable : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class TruncationTooSmall : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class MemoryBudgetExceeded : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class SolverFailure : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class StepSizeUnderflow : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

} // namespace chiralcav
