#pragma once

#include <stdexcept>
#include <string>

namespace esbgk {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates its documented range.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class NonFiniteError : public Error {
public:
    NonFiniteError(std::size_t node, const std::string& what)
        : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}

    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Density below the vacuum floor; moments are undefined.
class VacuumError : public Error {
public:
    using Error::Error;
};

/// Corrected temperature tensor (or a covariance) is not positive definite.
class DefinitenessError : public Error {
public:
    using Error::Error;
};

/// f > 0 where the reference density vanishes.
class SupportError : public Error {
public:
    using Error::Error;
};

/// Certificate requested for the wrong theta regime.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Hypothesis of an inequality (e.g. equal masses for Kullback) not met.
class HypothesisError : public Error {
public:
    using Error::Error;
};

}  // namespace esbgk

namespace esbgk {

/// A density value is negative where a nonnegative one is required.
class NegativeDensityError : public Error {
public:
    using Error::Error;
};

}  // namespace esbgk
