#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fsoest {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// argument outside the domain of a function
class DomainError : public Error {
public:
    using Error::Error;
};

// series or iteration did not reach tolerance
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace fsoest
