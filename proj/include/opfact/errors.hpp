#pragma once

#include <stdexcept>
#include <string>

namespace opfact {

// Argument shapes disagree (grid mismatch, vector length, matrix dims).
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// A point or function lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A requested value is outside the range a tabulated quantity covers.
class RangeError : public std::range_error {
public:
    explicit RangeError(const std::string& what) : std::range_error(what) {}
};

// Malformed configuration or persisted document.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace opfact
