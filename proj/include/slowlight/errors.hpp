#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

/// Malformed or inconsistent input (bad config, out-of-domain parameters).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine could not deliver its stated accuracy.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slowlight
