#pragma once

#include <stdexcept>
#include <string>

namespace arte {

/// Broad failure classes. The CLI maps them onto process exit codes.
enum class ErrorCategory { Config, Numerical, Io, Internal };

/// Base of every exception thrown by the library.
///
/// `name()` is a stable machine-readable identifier (e.g. "NonRealSpectrum")
/// that ends up in the CLI's error JSON.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string name, const std::string& what)
        : std::runtime_error(what), category_(category), name_(std::move(name)) {}

    ErrorCategory category() const noexcept { return category_; }
    const std::string& name() const noexcept { return name_; }

private:
    ErrorCategory category_;
    std::string name_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string name = "ConfigError")
        : Error(ErrorCategory::Config, std::move(name), what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::Io, "IoError", what) {}
};

class NumericalError : public Error {
public:
    NumericalError(std::string name, const std::string& what)
        : Error(ErrorCategory::Numerical, std::move(name), what) {}
};

/// Eigenvalues with a non-negligible imaginary part.
class NonRealSpectrum : public NumericalError {
public:
    explicit NonRealSpectrum(const std::string& what) : NumericalError("NonRealSpectrum", what) {}
};

/// sigma_a <= 0 or otherwise inadmissible optical coefficients. Bad input,
/// so it is reported as a configuration error.
class DegenerateMedium : public ConfigError {
public:
    explicit DegenerateMedium(const std::string& what) : ConfigError(what, "DegenerateMedium") {}
};

/// Generating vectors of an interface space are numerically dependent.
class RankDeficient : public NumericalError {
public:
    explicit RankDeficient(const std::string& what) : NumericalError("RankDeficient", what) {}
};

/// Interface coordinate matrix E is numerically singular.
class SingularE : public NumericalError {
public:
    explicit SingularE(const std::string& what) : NumericalError("SingularE", what) {}
};

/// Sparse LU hit a zero pivot. `row()` is the failing pivot index.
class SingularMatrix : public NumericalError {
public:
    SingularMatrix(const std::string& what, long row)
        : NumericalError("SingularMatrix", what), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

/// Internal consistency failure (row/column bookkeeping and the like).
class CountMismatch : public Error {
public:
    explicit CountMismatch(const std::string& what)
        : Error(ErrorCategory::Internal, "CountMismatch", what) {}
};

}  // namespace arte
