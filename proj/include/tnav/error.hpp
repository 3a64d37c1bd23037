#pragma once

#include <stdexcept>
#include <string>

namespace tnav {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller violated a documented contract (bad dimensions, empty dataset,
// mismatched geometry, invalid config value). CLI exit code 2.
class SpecError : public Error {
 public:
  explicit SpecError(const std::string& msg) : Error(msg) {}
};

// A spatial query left the valid extent of a map or patch.
class BoundsError : public Error {
 public:
  explicit BoundsError(const std::string& msg) : Error(msg) {}
};

// A serialized file failed validation (magic, version, payload length).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Grid search exhausted without reaching the goal.
class NoPathError : public Error {
 public:
  explicit NoPathError(const std::string& msg) : Error(msg) {}
};

// Filesystem-level failure (missing file, write failure).
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace tnav
