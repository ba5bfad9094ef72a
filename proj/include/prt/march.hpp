#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prt/galois.hpp"
#include "prt/memory.hpp"

namespace prt {

enum class MarchDirection : std::uint8_t { Up, Down, Any };

struct MarchOp {
  enum class Kind : std::uint8_t { Write, Read };

  Kind kind = Kind::Write;
  Element data = 0;  // value written, or value a read expects

  static MarchOp w(Element d) { return {Kind::Write, d}; }
  static MarchOp r(Element d) { return {Kind::Read, d}; }

  friend bool operator==(const MarchOp&, const MarchOp&) = default;
};

struct MarchElement {
  MarchDirection direction = MarchDirection::Any;
  std::vector<MarchOp> ops;

  friend bool operator==(const MarchElement&, const MarchElement&) = default;
};

struct MarchTest {
  std::vector<MarchElement> elements;

  /// Number of operations one address receives over the whole test.
  std::size_t ops_per_address() const noexcept;

  friend bool operator==(const MarchTest&, const MarchTest&) = default;
};

/// Parses `{ dir ( op , ... ) ; ... }` where dir is u, d or a and op is w or r
/// followed by hex digits. Whitespace is insignificant. Throws SyntaxError.
MarchTest parse_march(std::string_view text);

/// Canonical form, e.g. "{a(w0); u(r0,w1); d(r1,w0)}".
std::string format_march(const MarchTest& test);

struct MarchFailure {
  std::size_t element = 0;
  std::size_t op = 0;
  std::size_t address = 0;
  Element read = 0;
  Element expected = 0;

  friend bool operator==(const MarchFailure&, const MarchFailure&) = default;
};

struct MarchVerdict {
  bool pass = true;
  /// First mismatch only, unless executed with full_trace.
  std::vector<MarchFailure> failures;
  OpStats stats;

  const MarchFailure* first_failure() const noexcept { return failures.empty() ? nullptr : &failures.front(); }
};

struct MarchOptions {
  bool full_trace = false;
};

/// Runs the test on port 0. Up and Any ascend, Down descends. Throws
/// Errc::OutOfRange before touching memory if any datum is wider than a cell.
MarchVerdict execute_march(const MarchTest& test, Memory& mem, MarchOptions options = {});

/// {a(w0); u(r0,w1); d(r1,w0)}
MarchTest march_a();

/// {a(w0); a(r0); a(w1); a(r1)}
MarchTest march_smoke();

}  // namespace prt
