#pragma once

#include <stdexcept>
#include <string>

namespace cliffspec {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two objects from different algebras or modules were combined.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// The assembled constrained system is singular: s lies in the S-spectrum
/// with boundary conditions. Carries the invertibility margin.
class SingularSystem : public Error {
public:
    SingularSystem(const std::string& msg, double sigma_min, double sigma_max)
        : Error(msg), sigma_min(sigma_min), sigma_max(sigma_max) {}
    double sigma_min;
    double sigma_max;
};

/// s and q lie on the same sphere [q]; the two-point resolvent equation
/// has no invertible right factor there.
class DegeneratePair : public Error {
public:
    explicit DegeneratePair(const std::string& msg) : Error(msg) {}
};

/// Malformed or inconsistent job configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Filesystem failure, reported with the offending path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace cliffspec
