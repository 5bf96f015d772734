#pragma once

#include <stdexcept>

namespace gasdetect {

// Invalid configuration, topology, scenario, or call arguments.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-order input data (CSV records, sample streams).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gasdetect
