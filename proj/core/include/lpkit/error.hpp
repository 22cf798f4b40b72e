#pragma once

#include <stdexcept>
#include <string>

namespace lpkit {

// A numeric parameter outside the operator's admissible range (p <= 0, s outside (0,1), ...).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// The input violates an operator precondition, e.g. a nonzero mean where the
// multiplier is singular at the origin.
class PreconditionError : public std::domain_error {
public:
    explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

// Gamma evaluated at a non-positive integer.
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

// A set-theoretic hypothesis fails: Whitney decomposition of an empty set or of
// the whole space.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Malformed files or records.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lpkit
