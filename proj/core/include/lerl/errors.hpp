#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lerl {

/// Caller violated an operation's precondition (bad action, shape mismatch, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Configuration document is malformed or out of range. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checkpoint bytes could not be decoded.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedVersionError : public FormatError {
 public:
  UnsupportedVersionError(unsigned version, std::size_t offset)
      : FormatError("unsupported checkpoint version " + std::to_string(version), offset),
        version_(version) {}

  unsigned version() const noexcept { return version_; }

 private:
  unsigned version_;
};

}  // namespace lerl
