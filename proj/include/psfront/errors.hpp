#pragma once

#include <stdexcept>
#include <string>

namespace psfront {

// Error categories map onto the CLI exit codes: config=2, numerical=3, precondition=4.
enum class ErrorKind { Config, Numerical, Precondition };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ErrorKind::Config, msg) {}
};

// Expression parse failure; offset is a byte offset into the source text.
class SyntaxError : public ConfigError {
public:
    SyntaxError(std::size_t offset, const std::string& expected, const std::string& src);
    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(ErrorKind::Numerical, msg) {}
};

// Deferred evaluation failure (log of a negative number, division by zero, ...).
class DomainError : public NumericalError {
public:
    explicit DomainError(const std::string& msg) : NumericalError(msg) {}
};

class DetDrift : public NumericalError {
public:
    explicit DetDrift(double residual);
    double residual() const { return residual_; }

private:
    double residual_;
};

class IllConditioned : public NumericalError {
public:
    IllConditioned(double rcond, int order, double x, double y, bool has_node);
    double rcond() const { return rcond_; }

private:
    double rcond_;
};

class TailOverflow : public NumericalError {
public:
    TailOverflow(double tail, double budget, const std::string& where);
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(ErrorKind::Precondition, msg) {}
};

class DegenerateCurve : public PreconditionError {
public:
    explicit DegenerateCurve(const std::string& msg) : PreconditionError(msg) {}
};

class UnknownCurve : public ConfigError {
public:
    explicit UnknownCurve(const std::string& name) : ConfigError("unknown named curve: " + name) {}
};

class InvalidCharacteristicData : public PreconditionError {
public:
    explicit InvalidCharacteristicData(const std::string& condition)
        : PreconditionError("characteristic data violates: " + condition) {}
};

class NotOnSingularSet : public PreconditionError {
public:
    explicit NotOnSingularSet(const std::string& msg) : PreconditionError(msg) {}
};

class DegenerateConfiguration : public PreconditionError {
public:
    explicit DegenerateConfiguration(const std::string& msg) : PreconditionError(msg) {}
};

}  // namespace psfront
