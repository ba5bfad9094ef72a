#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prt {

enum class Errc {
  InvalidArgument,
  OutOfRange,
  NotIrreducible,
  NoInverse,
  DegenerateGenerator,
  ZeroState,
  InvalidConfig,
  PortConflict,
  UnsupportedStageCount,
  Syntax,
  GeometryMismatch,
  UniverseMismatch,
  EmptySchedule,
};

const char* errc_name(Errc code) noexcept;

/// Base exception for everything the library reports; carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parse failure with the byte offset into the input where it was detected.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error(Errc::Syntax, "offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        message_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

}  // namespace prt
