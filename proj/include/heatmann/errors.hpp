#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heatmann {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed quantity left the range of double precision. `mode` is the
/// 1-based spectral index at which it happened.
class OverflowError : public Error {
public:
    OverflowError(std::size_t mode, const std::string& what)
        : Error(what), mode_(mode) {}
    std::size_t mode() const noexcept { return mode_; }

private:
    std::size_t mode_;
};

/// A spectral function was not finite (or not defined) at some eigenvalue.
class DomainError : public Error {
public:
    DomainError(std::size_t mode, const std::string& what)
        : Error(what), mode_(mode) {}
    std::size_t mode() const noexcept { return mode_; }

private:
    std::size_t mode_;
};

/// Two coefficient vectors (or a vector and a problem) live on different grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters: inadmissible gamma, bad schedule entry, bad stopping rule, ...
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace heatmann
