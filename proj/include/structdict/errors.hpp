#ifndef STRUCTDICT_ERRORS_HPP
#define STRUCTDICT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace structdict {

// Error categories map onto CLI exit codes: configuration errors exit 2,
// data errors exit 3, numerical failures exit 4.

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape/conformance violations between paired objects (Y vs D, D vs X, ...).
class DimensionError : public ConfigError {
public:
  explicit DimensionError(const std::string& msg) : ConfigError(msg) {}
};

class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace structdict

#endif
