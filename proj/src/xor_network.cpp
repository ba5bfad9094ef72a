#include "prt/xor_network.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <deque>
#include <optional>
#include <sstream>

namespace prt {

namespace {

bool references_valid(Signal s, unsigned inputs, std::size_t gates_before) {
  switch (s.kind) {
    case Signal::Kind::Input: return s.index < inputs;
    case Signal::Kind::Gate: return s.index < gates_before;
    case Signal::Kind::Zero: return false;
  }
  return false;
}

// Breadth-first search over sets of computed linear forms. A state is a bitset
// indexed by form (an m-bit mask of inputs), so with m <= 4 there are at most
// 2^16 states and the first state covering every row is a minimum program.
XorNetwork exact_synthesis(const BitMatrix& mat) {
  const unsigned m = mat.size;
  const std::uint32_t forms = std::uint32_t{1} << m;

  std::uint32_t start = 0;
  for (unsigned j = 0; j < m; ++j) start |= std::uint32_t{1} << (std::uint32_t{1} << j);
  std::uint32_t goal = 0;
  for (unsigned i = 0; i < m; ++i) {
    if (const std::uint32_t r = mat.row(i); r != 0) goal |= std::uint32_t{1} << r;
  }

  struct Step {
    std::uint32_t prev = 0;
    std::uint8_t lhs = 0;
    std::uint8_t rhs = 0;
    bool seen = false;
  };
  std::vector<Step> steps(std::size_t{1} << forms);
  steps[start].seen = true;

  std::deque<std::uint32_t> frontier{start};
  std::optional<std::uint32_t> found;
  if ((start & goal) == goal) found = start;

  while (!found && !frontier.empty()) {
    const std::uint32_t state = frontier.front();
    frontier.pop_front();
    for (std::uint32_t a = 1; a < forms && !found; ++a) {
      if (!((state >> a) & 1U)) continue;
      for (std::uint32_t b = a + 1; b < forms; ++b) {
        if (!((state >> b) & 1U)) continue;
        const std::uint32_t next = state | (std::uint32_t{1} << (a ^ b));
        if (steps[next].seen) continue;
        steps[next] = {state, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), true};
        if ((next & goal) == goal) {
          found = next;
          break;
        }
        frontier.push_back(next);
      }
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> program;
  for (std::uint32_t s = *found; s != start; s = steps[s].prev) program.emplace_back(steps[s].lhs, steps[s].rhs);
  std::reverse(program.begin(), program.end());

  std::vector<Signal> by_mask(forms, Signal::zero());
  for (unsigned j = 0; j < m; ++j) by_mask[std::uint32_t{1} << j] = Signal::input(j);
  std::vector<XorGate> gates;
  for (const auto& [a, b] : program) {
    by_mask[a ^ b] = Signal::gate(static_cast<std::uint32_t>(gates.size()));
    gates.push_back({by_mask[a], by_mask[b]});
  }

  std::vector<Signal> outputs;
  for (unsigned i = 0; i < m; ++i) {
    const std::uint32_t r = mat.row(i);
    outputs.push_back(r == 0 ? Signal::zero() : by_mask[r]);
  }
  return XorNetwork(m, std::move(gates), std::move(outputs));
}

// Paar-style greedy: repeatedly factor out the signal pair shared by the most
// rows, then chain whatever each row has left.
XorNetwork greedy_synthesis(const BitMatrix& mat) {
  const unsigned m = mat.size;
  using Id = std::uint32_t;  // < m: input, otherwise gate (id - m)
  std::vector<std::vector<Id>> rows(m);
  for (unsigned i = 0; i < m; ++i) {
    const std::uint32_t r = mat.row(i);
    for (unsigned j = 0; j < m; ++j) {
      if ((r >> j) & 1U) rows[i].push_back(j);
    }
  }

  std::vector<XorGate> gates;
  auto to_signal = [m](Id id) { return id < m ? Signal::input(id) : Signal::gate(id - m); };
  auto add_gate = [&](Id a, Id b) {
    gates.push_back({to_signal(a), to_signal(b)});
    return static_cast<Id>(m + gates.size() - 1);
  };

  for (;;) {
    const std::size_t ids = m + gates.size();
    std::vector<unsigned> count(ids * ids, 0);
    for (const auto& row : rows) {
      for (std::size_t x = 0; x < row.size(); ++x) {
        for (std::size_t y = x + 1; y < row.size(); ++y) {
          const Id a = std::min(row[x], row[y]);
          const Id b = std::max(row[x], row[y]);
          ++count[a * ids + b];
        }
      }
    }
    const auto best = std::max_element(count.begin(), count.end());  // first maximum: lowest pair wins ties
    if (*best < 2) break;
    const auto flat = static_cast<std::size_t>(best - count.begin());
    const Id a = static_cast<Id>(flat / ids);
    const Id b = static_cast<Id>(flat % ids);
    const Id g = add_gate(a, b);
    for (auto& row : rows) {
      const bool has_a = std::find(row.begin(), row.end(), a) != row.end();
      const bool has_b = std::find(row.begin(), row.end(), b) != row.end();
      if (!has_a || !has_b) continue;
      std::erase_if(row, [&](Id s) { return s == a || s == b; });
      row.push_back(g);
    }
  }

  std::vector<Signal> outputs;
  for (const auto& row : rows) {
    if (row.empty()) {
      outputs.push_back(Signal::zero());
      continue;
    }
    Id acc = row.front();
    for (std::size_t x = 1; x < row.size(); ++x) acc = add_gate(acc, row[x]);
    outputs.push_back(to_signal(acc));
  }
  return XorNetwork(m, std::move(gates), std::move(outputs));
}

std::string signal_name(Signal s) {
  switch (s.kind) {
    case Signal::Kind::Input: return "x" + std::to_string(s.index);
    case Signal::Kind::Gate: return "t" + std::to_string(s.index);
    case Signal::Kind::Zero: break;
  }
  return "0";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<std::uint32_t> parse_index(std::string_view digits) {
  std::uint32_t v = 0;
  if (digits.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

Signal parse_signal(std::string_view token, std::size_t line) {
  token = trim(token);
  if (token.size() >= 2 && (token[0] == 'x' || token[0] == 't')) {
    if (auto idx = parse_index(token.substr(1))) {
      return token[0] == 'x' ? Signal::input(*idx) : Signal::gate(*idx);
    }
  }
  throw Error(Errc::Syntax, "netlist line " + std::to_string(line) + ": bad signal '" + std::string(token) + "'");
}

}  // namespace

XorNetwork::XorNetwork(unsigned inputs, std::vector<XorGate> gates, std::vector<Signal> outputs)
    : inputs_(inputs), gates_(std::move(gates)), outputs_(std::move(outputs)) {
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    if (!references_valid(gates_[g].lhs, inputs_, g) || !references_valid(gates_[g].rhs, inputs_, g)) {
      throw Error(Errc::InvalidArgument, "gate t" + std::to_string(g) + " references an undefined signal");
    }
  }
  for (const Signal& s : outputs_) {
    if (s.kind != Signal::Kind::Zero && !references_valid(s, inputs_, gates_.size())) {
      throw Error(Errc::InvalidArgument, "output references an undefined signal");
    }
  }
}

std::size_t naive_gate_count(const BitMatrix& mat) {
  std::size_t total = 0;
  for (unsigned i = 0; i < mat.size; ++i) {
    const int ones = std::popcount(mat.row(i));
    if (ones > 1) total += static_cast<std::size_t>(ones - 1);
  }
  return total;
}

XorNetwork synthesize_multiplier(const FieldSpec& field, Element c) {
  const BitMatrix mat = mul_by_const_matrix(field, c);
  return field.width() <= 4 ? exact_synthesis(mat) : greedy_synthesis(mat);
}

Element eval_xor_network(const XorNetwork& net, Element x) {
  std::vector<std::uint8_t> gate_values(net.gate_count());
  auto value = [&](Signal s) -> std::uint8_t {
    switch (s.kind) {
      case Signal::Kind::Input: return static_cast<std::uint8_t>((x >> s.index) & 1U);
      case Signal::Kind::Gate: return gate_values[s.index];
      case Signal::Kind::Zero: break;
    }
    return 0;
  };
  for (std::size_t g = 0; g < net.gate_count(); ++g) {
    gate_values[g] = value(net.gates()[g].lhs) ^ value(net.gates()[g].rhs);
  }
  Element y = 0;
  for (std::size_t j = 0; j < net.outputs().size(); ++j) y |= Element{value(net.outputs()[j])} << j;
  return y;
}

std::string to_netlist(const XorNetwork& net) {
  std::ostringstream out;
  for (std::size_t g = 0; g < net.gate_count(); ++g) {
    out << 't' << g << " = " << signal_name(net.gates()[g].lhs) << " ^ " << signal_name(net.gates()[g].rhs) << '\n';
  }
  for (std::size_t j = 0; j < net.outputs().size(); ++j) {
    if (net.outputs()[j].kind == Signal::Kind::Zero) continue;
    out << 'y' << j << " = " << signal_name(net.outputs()[j]) << '\n';
  }
  return out.str();
}

XorNetwork parse_netlist(std::string_view text, unsigned inputs) {
  std::vector<XorGate> gates;
  std::vector<Signal> outputs(inputs, Signal::zero());
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::Syntax, "netlist line " + std::to_string(line_no) + ": expected '='");
    }
    const std::string_view lhs = trim(line.substr(0, eq));
    const std::string_view rhs = line.substr(eq + 1);
    const auto idx = lhs.size() >= 2 ? parse_index(lhs.substr(1)) : std::nullopt;
    if (!idx || (lhs[0] != 't' && lhs[0] != 'y')) {
      throw Error(Errc::Syntax, "netlist line " + std::to_string(line_no) + ": bad target '" + std::string(lhs) + "'");
    }
    if (lhs[0] == 't') {
      if (*idx != gates.size()) {
        throw Error(Errc::Syntax, "netlist line " + std::to_string(line_no) + ": gates must be numbered in order");
      }
      const auto caret = rhs.find('^');
      if (caret == std::string_view::npos) {
        throw Error(Errc::Syntax, "netlist line " + std::to_string(line_no) + ": expected '^'");
      }
      gates.push_back({parse_signal(rhs.substr(0, caret), line_no), parse_signal(rhs.substr(caret + 1), line_no)});
    } else {
      if (*idx >= inputs) {
        throw Error(Errc::Syntax, "netlist line " + std::to_string(line_no) + ": output index out of range");
      }
      outputs[*idx] = parse_signal(rhs, line_no);
    }
  }
  return XorNetwork(inputs, std::move(gates), std::move(outputs));
}

}  // namespace prt
