#pragma once

#include <stdexcept>
#include <string>

namespace finestrat {

//! Invalid configuration or precondition violated by the caller.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

//! Malformed or inconsistent input data (CSV schema, missing columns, ...).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

//! A numerical routine could not produce a valid result.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace finestrat
