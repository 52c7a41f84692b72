#pragma once

#include <stdexcept>
#include <string>

namespace contralign {

/// Thrown for every recoverable failure: malformed input files, violated
/// preconditions, enumeration guards, diverging training runs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace contralign
