#pragma once

#include <stdexcept>
#include <string>

namespace fracpl {

// invalid-argument and domain-error map onto the standard exceptions.
using InvalidArgument = std::invalid_argument;
using DomainError = std::domain_error;

class ExtrapolationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fracpl
