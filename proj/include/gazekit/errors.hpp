#pragma once

#include <stdexcept>
#include <string>

namespace gazekit {

// Error taxonomy: config errors are caught before any work starts, data
// errors name the offending item, contract errors are programming mistakes
// at module boundaries.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gazekit
