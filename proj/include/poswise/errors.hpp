#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace poswise {

/// Operand shapes that do not fit the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or truncated dataset bytes. `offset` is where parsing stopped.
class DataFormatError : public std::runtime_error {
 public:
  DataFormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// A loss became NaN or infinite during training.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace poswise
