#pragma once

#include <stdexcept>
#include <string>

namespace surro {

// Input violates a documented domain precondition (bad parameter range etc.).
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Structured input (CSV cell, flag value) could not be parsed.
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input violates a dataset/type invariant.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-PD matrix, singular block, ...).
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested target cannot be met (e.g. power target unreachable at this n).
class InfeasibleError : public std::runtime_error {
  public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace surro
