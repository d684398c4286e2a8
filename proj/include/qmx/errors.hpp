#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qmx {

/// Input that could not be parsed; carries the byte offset of the failure.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}

  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

/// A configurable resource cap was exceeded; carries the count that would
/// have been needed so callers can report or retry with a larger cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::uint64_t needed, std::uint64_t cap)
      : std::runtime_error(what + ": need " + std::to_string(needed) + ", cap " +
                           std::to_string(cap)),
        needed_(needed),
        cap_(cap) {}

  std::uint64_t needed() const noexcept { return needed_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t needed_;
  std::uint64_t cap_;
};

}  // namespace qmx
