#include "prt/march.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

namespace prt {

namespace {

class MarchParser {
 public:
  explicit MarchParser(std::string_view text) : text_(text) {}

  MarchTest parse() {
    MarchTest test;
    expect('{', "'{'");
    test.elements.push_back(element());
    while (peek() == ';') {
      ++pos_;
      test.elements.push_back(element());
    }
    expect('}', "';' or '}'");
    if (peek() != '\0') fail("end of input");
    return test;
  }

 private:
  char peek() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  [[noreturn]] void fail(const std::string& expected) {
    peek();
    const std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw SyntaxError(pos_, "expected " + expected + ", found " + found);
  }

  void expect(char c, const char* what) {
    if (peek() != c) fail(what);
    ++pos_;
  }

  MarchElement element() {
    MarchElement e;
    switch (peek()) {
      case 'u': e.direction = MarchDirection::Up; break;
      case 'd': e.direction = MarchDirection::Down; break;
      case 'a': e.direction = MarchDirection::Any; break;
      default: fail("direction 'u', 'd' or 'a'");
    }
    ++pos_;
    expect('(', "'('");
    if (peek() == ')') throw SyntaxError(pos_, "empty element: expected at least one operation");
    e.ops.push_back(op());
    while (peek() == ',') {
      ++pos_;
      e.ops.push_back(op());
    }
    expect(')', "',' or ')'");
    return e;
  }

  MarchOp op() {
    MarchOp o;
    switch (peek()) {
      case 'w': o.kind = MarchOp::Kind::Write; break;
      case 'r': o.kind = MarchOp::Kind::Read; break;
      default: fail("operation 'w' or 'r'");
    }
    ++pos_;
    const std::size_t digits_at = pos_;
    std::size_t digits = 0;
    std::uint32_t value = 0;
    while (std::isxdigit(static_cast<unsigned char>(peek()))) {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
      value = value * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : c - 'a' + 10);
      if (value > 0xFFFF) throw SyntaxError(digits_at, "data value exceeds 16 bits");
      ++digits;
      ++pos_;
    }
    if (digits == 0) fail("hex digit");
    o.data = value;
    return o;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

char direction_letter(MarchDirection d) {
  switch (d) {
    case MarchDirection::Up: return 'u';
    case MarchDirection::Down: return 'd';
    case MarchDirection::Any: return 'a';
  }
  return '?';
}

}  // namespace

std::size_t MarchTest::ops_per_address() const noexcept {
  return std::accumulate(elements.begin(), elements.end(), std::size_t{0},
                         [](std::size_t acc, const MarchElement& e) { return acc + e.ops.size(); });
}

MarchTest parse_march(std::string_view text) { return MarchParser(text).parse(); }

std::string format_march(const MarchTest& test) {
  std::ostringstream out;
  out << std::hex << '{';
  for (std::size_t i = 0; i < test.elements.size(); ++i) {
    if (i != 0) out << "; ";
    const MarchElement& e = test.elements[i];
    out << direction_letter(e.direction) << '(';
    for (std::size_t j = 0; j < e.ops.size(); ++j) {
      if (j != 0) out << ',';
      out << (e.ops[j].kind == MarchOp::Kind::Write ? 'w' : 'r') << e.ops[j].data;
    }
    out << ')';
  }
  out << '}';
  return out.str();
}

MarchVerdict execute_march(const MarchTest& test, Memory& mem, MarchOptions options) {
  const std::size_t n = mem.config().cells;
  const unsigned m = mem.config().width;
  for (const auto& e : test.elements) {
    for (const auto& o : e.ops) {
      if (o.data >> m) {
        throw Error(Errc::OutOfRange, "march datum " + std::to_string(o.data) + " does not fit a " +
                                          std::to_string(m) + "-bit cell");
      }
    }
  }

  MarchVerdict verdict;
  const OpStats before = mem.stats();
  for (std::size_t ei = 0; ei < test.elements.size(); ++ei) {
    const MarchElement& e = test.elements[ei];
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t addr = e.direction == MarchDirection::Down ? n - 1 - step : step;
      for (std::size_t oi = 0; oi < e.ops.size(); ++oi) {
        const MarchOp& o = e.ops[oi];
        if (o.kind == MarchOp::Kind::Write) {
          mem.write(0, addr, o.data);
          continue;
        }
        const Element got = mem.read(0, addr);
        if (got == o.data) continue;
        verdict.pass = false;
        verdict.failures.push_back({ei, oi, addr, got, o.data});
        if (!options.full_trace) {
          verdict.stats = mem.stats() - before;
          return verdict;
        }
      }
    }
  }
  verdict.stats = mem.stats() - before;
  return verdict;
}

MarchTest march_a() {
  return {{
      {MarchDirection::Any, {MarchOp::w(0)}},
      {MarchDirection::Up, {MarchOp::r(0), MarchOp::w(1)}},
      {MarchDirection::Down, {MarchOp::r(1), MarchOp::w(0)}},
  }};
}

MarchTest march_smoke() {
  return {{
      {MarchDirection::Any, {MarchOp::w(0)}},
      {MarchDirection::Any, {MarchOp::r(0)}},
      {MarchDirection::Any, {MarchOp::w(1)}},
      {MarchDirection::Any, {MarchOp::r(1)}},
  }};
}

}  // namespace prt
