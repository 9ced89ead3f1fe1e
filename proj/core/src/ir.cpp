/*
 * Copyright 2026 The quilopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "quilopt/ir.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace quilopt {

namespace {

constexpr std::array<GateSignature, 15> kGates = {{
    {"I", 0, 1},     {"X", 0, 1},     {"Y", 0, 1},     {"Z", 0, 1},
    {"H", 0, 1},     {"S", 0, 1},     {"T", 0, 1},     {"RX", 1, 1},
    {"RY", 1, 1},    {"RZ", 1, 1},    {"PHASE", 1, 1}, {"CNOT", 0, 2},
    {"CZ", 0, 2},    {"SWAP", 0, 2},  {"CCNOT", 0, 3},
}};

struct OpcodeName {
  Opcode op;
  std::string_view name;
  std::size_t operands;
};

constexpr std::array<OpcodeName, 11> kOpcodes = {{
    {Opcode::Move, "MOVE", 2},
    {Opcode::Exchange, "EXCHANGE", 2},
    {Opcode::Add, "ADD", 2},
    {Opcode::Sub, "SUB", 2},
    {Opcode::Mul, "MUL", 2},
    {Opcode::Div, "DIV", 2},
    {Opcode::Neg, "NEG", 1},
    {Opcode::Not, "NOT", 1},
    {Opcode::And, "AND", 2},
    {Opcode::Ior, "IOR", 2},
    {Opcode::Xor, "XOR", 2},
}};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char) && s.back() != '-';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::uint64_t> parse_unsigned(std::string_view s) {
  std::uint64_t value = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// [-] number | [-] [number '*'] pi ['/' number]
std::optional<Literal> parse_literal(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;
  auto pi_pos = s.find("pi");
  if (pi_pos == std::string_view::npos) {
    const bool integral = s.find_first_of(".eE") == std::string_view::npos;
    auto value = parse_double(s);
    if (!value || !std::isfinite(*value)) return std::nullopt;
    return Literal{negative ? -*value : *value, integral};
  }
  double numerator = 1.0;
  std::string_view head = s.substr(0, pi_pos);
  if (!head.empty()) {
    if (head.back() != '*') return std::nullopt;
    auto n = parse_double(head.substr(0, head.size() - 1));
    if (!n) return std::nullopt;
    numerator = *n;
  }
  std::string_view tail = s.substr(pi_pos + 2);
  double value = numerator * std::numbers::pi;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    auto d = parse_double(tail.substr(1));
    if (!d || *d == 0.0) return std::nullopt;
    value = value / *d;
  }
  return Literal{negative ? -value : value, false};
}

class LineParser {
 public:
  LineParser(std::size_t line, std::string_view text) : line_(line), text_(text) {}

  Instruction parse() {
    auto tokens = split_ws(text_);
    const std::string_view head = tokens.front();
    if (head == "DECLARE") return make(parse_declare(tokens));
    if (head == "MEASURE") return make(parse_measure(tokens));
    if (head == "RESET") return make(parse_reset(tokens));
    if (head == "LABEL") {
      expect_count(tokens, 2);
      return make(Label{label_name(tokens[1])});
    }
    if (head == "JUMP") {
      expect_count(tokens, 2);
      return make(Jump{label_name(tokens[1])});
    }
    if (head == "JUMP-WHEN") {
      expect_count(tokens, 3);
      return make(JumpWhen{label_name(tokens[1]), memory_ref(tokens[2])});
    }
    if (head == "JUMP-UNLESS") {
      expect_count(tokens, 3);
      return make(JumpUnless{label_name(tokens[1]), memory_ref(tokens[2])});
    }
    if (head == "HALT") {
      expect_count(tokens, 1);
      return make(Halt{});
    }
    if (auto op = opcode_from_string(head)) return make(parse_classical(*op, tokens));
    return make(parse_gate());
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw QuilError(line_, message);
  }

  Instruction make(InstructionKind kind) const { return Instruction{std::move(kind), line_}; }

  void expect_count(const std::vector<std::string_view>& tokens, std::size_t n) const {
    if (tokens.size() != n) {
      fail("expected " + std::to_string(n - 1) + " operand(s) for " +
           std::string(tokens.front()));
    }
  }

  std::string label_name(std::string_view token) const {
    if (token.size() < 2 || token.front() != '@' || !is_identifier(token.substr(1))) {
      fail("malformed label '" + std::string(token) + "'");
    }
    return std::string(token.substr(1));
  }

  Qubit qubit(std::string_view token) const {
    auto value = parse_unsigned(token);
    if (!value || *value > std::numeric_limits<Qubit>::max()) {
      fail("malformed qubit index '" + std::string(token) + "'");
    }
    return static_cast<Qubit>(*value);
  }

  MemoryRef memory_ref(std::string_view token) const {
    auto bracket = token.find('[');
    std::string_view name = token.substr(0, bracket);
    if (!is_identifier(name) || name == "pi") {
      fail("malformed memory reference '" + std::string(token) + "'");
    }
    std::size_t index = 0;
    if (bracket != std::string_view::npos) {
      if (token.back() != ']') fail("missing ']' in '" + std::string(token) + "'");
      auto value = parse_unsigned(token.substr(bracket + 1, token.size() - bracket - 2));
      if (!value) fail("malformed index in '" + std::string(token) + "'");
      index = static_cast<std::size_t>(*value);
    }
    return MemoryRef{std::string(name), index};
  }

  Operand operand(std::string_view token) const {
    token = trim(token);
    if (auto literal = parse_literal(token)) return *literal;
    return memory_ref(token);
  }

  Declare parse_declare(const std::vector<std::string_view>& tokens) const {
    expect_count(tokens, 3);
    if (!is_identifier(tokens[1]) || tokens[1] == "pi") {
      fail("malformed region name '" + std::string(tokens[1]) + "'");
    }
    MemoryRegion region;
    region.name = std::string(tokens[1]);
    std::string_view type = tokens[2];
    auto bracket = type.find('[');
    if (bracket != std::string_view::npos) {
      if (type.back() != ']') fail("missing ']' in type");
      auto length = parse_unsigned(type.substr(bracket + 1, type.size() - bracket - 2));
      if (!length || *length == 0) fail("region length must be a positive integer");
      region.length = static_cast<std::size_t>(*length);
      region.array_syntax = true;
      type = type.substr(0, bracket);
    }
    if (type == "BIT") {
      region.kind = MemoryKind::Bit;
    } else if (type == "OCTET") {
      region.kind = MemoryKind::Octet;
    } else if (type == "INTEGER") {
      region.kind = MemoryKind::Integer;
    } else if (type == "REAL") {
      region.kind = MemoryKind::Real;
    } else {
      fail("unknown memory type '" + std::string(type) + "'");
    }
    return Declare{std::move(region)};
  }

  Measure parse_measure(const std::vector<std::string_view>& tokens) const {
    if (tokens.size() != 2 && tokens.size() != 3) fail("MEASURE takes a qubit and an optional target");
    Measure m{qubit(tokens[1]), std::nullopt};
    if (tokens.size() == 3) m.target = memory_ref(tokens[2]);
    return m;
  }

  Reset parse_reset(const std::vector<std::string_view>& tokens) const {
    if (tokens.size() > 2) fail("RESET takes at most one qubit");
    Reset r;
    if (tokens.size() == 2) r.qubit = qubit(tokens[1]);
    return r;
  }

  Classical parse_classical(Opcode op, const std::vector<std::string_view>& tokens) const {
    expect_count(tokens, operand_count(op) + 1);
    Classical c{op, {}};
    for (std::size_t i = 1; i < tokens.size(); ++i) c.operands.push_back(operand(tokens[i]));
    if (!is_ref(c.operands[0])) fail("first operand of " + std::string(tokens[0]) + " must be a memory reference");
    if (op == Opcode::Exchange && !is_ref(c.operands[1])) {
      fail("EXCHANGE operands must be memory references");
    }
    return c;
  }

  Gate parse_gate() const {
    std::string_view s = trim(text_);
    std::size_t name_end = 0;
    while (name_end < s.size() && is_ident_char(s[name_end])) ++name_end;
    Gate gate;
    gate.name = std::string(s.substr(0, name_end));
    const GateSignature* sig = find_gate(gate.name);
    if (sig == nullptr) fail("unknown instruction or gate '" + gate.name + "'");
    std::string_view rest = s.substr(name_end);
    if (!rest.empty() && rest.front() == '(') {
      auto close = rest.find(')');
      if (close == std::string_view::npos) fail("missing ')' in gate parameters");
      std::string_view params = rest.substr(1, close - 1);
      std::size_t start = 0;
      while (true) {
        auto comma = params.find(',', start);
        gate.params.push_back(operand(params.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      rest = rest.substr(close + 1);
    }
    for (auto token : split_ws(rest)) gate.qubits.push_back(qubit(token));
    return gate;
  }

  std::size_t line_;
  std::string_view text_;
};

void check_ref(const Program& program, const MemoryRef& ref, std::size_t line) {
  const MemoryRegion* region = program.find_region(ref.region);
  if (region == nullptr) {
    throw QuilError(line, "undeclared memory reference '" + ref.region + "'");
  }
  if (ref.index >= region->length) {
    throw QuilError(line, "index " + std::to_string(ref.index) + " out of range for '" +
                              ref.region + "'");
  }
}

void check_operand(const Program& program, const Operand& op, std::size_t line) {
  if (const auto* ref = std::get_if<MemoryRef>(&op)) check_ref(program, *ref, line);
}

std::string format_real(double value) {
  if (value != 0.0) {
    for (int d : {1, 2, 3, 4, 6, 8, 16, 32, 64, 128, 256, 512, 1024}) {
      const double n = std::round(value * d / std::numbers::pi);
      if (n == 0.0 || std::fabs(n) > 4096) continue;
      if ((n * std::numbers::pi) / d != value) continue;
      std::string out;
      if (n == -1) {
        out = "-pi";
      } else if (n == 1) {
        out = "pi";
      } else {
        out = std::to_string(static_cast<long long>(n)) + "*pi";
      }
      if (d != 1) out += "/" + std::to_string(d);
      return out;
    }
  }
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string out(buf.data(), ptr);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

}  // namespace

std::string_view to_string(MemoryKind kind) {
  switch (kind) {
    case MemoryKind::Bit: return "BIT";
    case MemoryKind::Octet: return "OCTET";
    case MemoryKind::Integer: return "INTEGER";
    case MemoryKind::Real: return "REAL";
  }
  return "?";
}

bool is_integral(MemoryKind kind) { return kind != MemoryKind::Real; }

std::string_view to_string(Opcode op) {
  for (const auto& entry : kOpcodes) {
    if (entry.op == op) return entry.name;
  }
  return "?";
}

std::optional<Opcode> opcode_from_string(std::string_view text) {
  for (const auto& entry : kOpcodes) {
    if (entry.name == text) return entry.op;
  }
  return std::nullopt;
}

std::size_t operand_count(Opcode op) {
  for (const auto& entry : kOpcodes) {
    if (entry.op == op) return entry.operands;
  }
  return 0;
}

std::string_view to_string(DeviceClass device) {
  switch (device) {
    case DeviceClass::Quantum: return "quantum";
    case DeviceClass::Classical: return "classical";
    case DeviceClass::Hybrid: return "hybrid";
  }
  return "?";
}

const GateSignature* find_gate(std::string_view name) {
  for (const auto& sig : kGates) {
    if (sig.name == name) return &sig;
  }
  return nullptr;
}

bool Gate::is_parameterized() const {
  return std::any_of(params.begin(), params.end(), is_ref);
}

DeviceClass classify(const Instruction& instruction) {
  return std::visit(
      [](const auto& inst) -> DeviceClass {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, Gate>) {
          return inst.is_parameterized() ? DeviceClass::Hybrid : DeviceClass::Quantum;
        } else if constexpr (std::is_same_v<T, Classical> || std::is_same_v<T, Declare>) {
          return DeviceClass::Classical;
        } else {
          return DeviceClass::Hybrid;
        }
      },
      instruction.kind);
}

ResourceSets resources(const Instruction& instruction, const std::set<Qubit>* universe) {
  ResourceSets out;
  auto read = [&](const Operand& op) {
    if (const auto* ref = std::get_if<MemoryRef>(&op)) out.reads.insert(CellId{ref->region, ref->index});
  };
  auto write = [&](const Operand& op) {
    if (const auto* ref = std::get_if<MemoryRef>(&op)) out.writes.insert(CellId{ref->region, ref->index});
  };
  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, Declare>) {
          for (std::size_t i = 0; i < inst.region.length; ++i) {
            out.writes.insert(CellId{inst.region.name, i});
          }
        } else if constexpr (std::is_same_v<T, Gate>) {
          for (Qubit q : inst.qubits) {
            out.reads.insert(QubitId{q});
            out.writes.insert(QubitId{q});
          }
          for (const auto& p : inst.params) read(p);
        } else if constexpr (std::is_same_v<T, Classical>) {
          write(inst.operands[0]);
          if (inst.op != Opcode::Move) read(inst.operands[0]);
          if (inst.operands.size() > 1) {
            read(inst.operands[1]);
            if (inst.op == Opcode::Exchange) write(inst.operands[1]);
          }
        } else if constexpr (std::is_same_v<T, Measure>) {
          out.reads.insert(QubitId{inst.qubit});
          out.writes.insert(QubitId{inst.qubit});
          if (inst.target) out.writes.insert(CellId{inst.target->region, inst.target->index});
        } else if constexpr (std::is_same_v<T, Reset>) {
          if (inst.qubit) {
            out.writes.insert(QubitId{*inst.qubit});
          } else if (universe != nullptr) {
            for (Qubit q : *universe) out.writes.insert(QubitId{q});
          }
        } else if constexpr (std::is_same_v<T, JumpWhen> || std::is_same_v<T, JumpUnless>) {
          out.reads.insert(CellId{inst.condition.region, inst.condition.index});
        }
      },
      instruction.kind);
  return out;
}

bool conflicts(const ResourceSets& a, const ResourceSets& b) {
  auto intersects = [](const std::set<Resource>& x, const std::set<Resource>& y) {
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        return true;
      }
    }
    return false;
  };
  return intersects(a.writes, b.reads) || intersects(a.writes, b.writes) ||
         intersects(a.reads, b.writes);
}

const MemoryRegion* Program::find_region(std::string_view name) const {
  for (const auto& region : regions) {
    if (region.name == name) return &region;
  }
  return nullptr;
}

std::set<Qubit> Program::qubits() const {
  std::set<Qubit> out;
  for (const auto& inst : instructions) {
    if (const auto* g = std::get_if<Gate>(&inst.kind)) {
      out.insert(g->qubits.begin(), g->qubits.end());
    } else if (const auto* m = std::get_if<Measure>(&inst.kind)) {
      out.insert(m->qubit);
    } else if (const auto* r = std::get_if<Reset>(&inst.kind)) {
      if (r->qubit) out.insert(*r->qubit);
    }
  }
  return out;
}

QuilError::QuilError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::set<std::string> default_readout(const std::vector<MemoryRegion>& regions) {
  std::set<std::string> out;
  for (const auto& region : regions) {
    if (region.name == "ro") return {"ro"};
  }
  for (const auto& region : regions) out.insert(region.name);
  return out;
}

Program parse(std::string_view text) {
  Program program;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto newline = text.find('\n', pos);
    if (newline == std::string_view::npos) newline = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, newline - pos);
    pos = newline + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    program.instructions.push_back(LineParser(line_no, line).parse());
  }
  refresh_regions(program);
  program.readout = default_readout(program.regions);
  validate(program);
  return program;
}

void refresh_regions(Program& program) {
  program.regions.clear();
  for (const auto& inst : program.instructions) {
    if (const auto* d = std::get_if<Declare>(&inst.kind)) {
      if (program.find_region(d->region.name) != nullptr) {
        throw QuilError(inst.source_line, "region '" + d->region.name + "' declared twice");
      }
      program.regions.push_back(d->region);
    }
  }
  std::erase_if(program.readout,
                [&](const std::string& name) { return program.find_region(name) == nullptr; });
}

void validate(const Program& program) {
  std::set<std::string> names;
  for (const auto& region : program.regions) {
    if (!names.insert(region.name).second) {
      throw QuilError(0, "region '" + region.name + "' declared twice");
    }
    if (region.length == 0) throw QuilError(0, "region '" + region.name + "' has zero length");
  }
  for (const auto& name : program.readout) {
    if (program.find_region(name) == nullptr) {
      throw QuilError(0, "readout region '" + name + "' is not declared");
    }
  }
  std::set<std::string> labels;
  for (const auto& inst : program.instructions) {
    if (const auto* l = std::get_if<Label>(&inst.kind)) {
      if (!labels.insert(l->name).second) {
        throw QuilError(inst.source_line, "duplicate label '@" + l->name + "'");
      }
    }
  }
  auto check_target = [&](const std::string& target, std::size_t line) {
    if (!labels.contains(target)) throw QuilError(line, "jump to undefined label '@" + target + "'");
  };
  for (const auto& inst : program.instructions) {
    const std::size_t line = inst.source_line;
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, Gate>) {
            const GateSignature* sig = find_gate(i.name);
            if (sig == nullptr) throw QuilError(line, "unknown gate '" + i.name + "'");
            if (i.params.size() != sig->params) {
              throw QuilError(line, "gate " + i.name + " takes " + std::to_string(sig->params) +
                                        " parameter(s)");
            }
            if (i.qubits.size() != sig->qubits) {
              throw QuilError(line, "gate " + i.name + " acts on " + std::to_string(sig->qubits) +
                                        " qubit(s)");
            }
            std::set<Qubit> distinct(i.qubits.begin(), i.qubits.end());
            if (distinct.size() != i.qubits.size()) {
              throw QuilError(line, "gate " + i.name + " repeats a qubit operand");
            }
            for (const auto& p : i.params) check_operand(program, p, line);
          } else if constexpr (std::is_same_v<T, Classical>) {
            if (i.operands.size() != operand_count(i.op) || i.operands.empty() ||
                !is_ref(i.operands[0])) {
              throw QuilError(line, "malformed " + std::string(to_string(i.op)));
            }
            if (i.op == Opcode::Exchange && !is_ref(i.operands[1])) {
              throw QuilError(line, "EXCHANGE operands must be memory references");
            }
            for (const auto& op : i.operands) check_operand(program, op, line);
          } else if constexpr (std::is_same_v<T, Measure>) {
            if (i.target) check_ref(program, *i.target, line);
          } else if constexpr (std::is_same_v<T, Jump>) {
            check_target(i.target, line);
          } else if constexpr (std::is_same_v<T, JumpWhen> || std::is_same_v<T, JumpUnless>) {
            check_target(i.target, line);
            check_ref(program, i.condition, line);
          }
        },
        inst.kind);
  }
}

std::string emit_literal(const Literal& literal) {
  if (literal.integral) {
    return std::to_string(static_cast<long long>(literal.value));
  }
  return format_real(literal.value);
}

namespace {

std::string emit_ref(const MemoryRef& ref, const Program* context) {
  if (context != nullptr) {
    if (const MemoryRegion* region = context->find_region(ref.region);
        region != nullptr && !region->array_syntax && ref.index == 0) {
      return ref.region;
    }
  }
  return ref.region + "[" + std::to_string(ref.index) + "]";
}

}  // namespace

std::string emit(const Operand& operand, const Program* context) {
  if (const auto* ref = std::get_if<MemoryRef>(&operand)) return emit_ref(*ref, context);
  return emit_literal(std::get<Literal>(operand));
}

std::string emit(const Instruction& instruction, const Program* context) {
  std::ostringstream out;
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Declare>) {
          out << "DECLARE " << i.region.name << ' ' << to_string(i.region.kind);
          if (i.region.array_syntax || i.region.length != 1) out << '[' << i.region.length << ']';
        } else if constexpr (std::is_same_v<T, Gate>) {
          out << i.name;
          if (!i.params.empty()) {
            out << '(';
            for (std::size_t k = 0; k < i.params.size(); ++k) {
              if (k != 0) out << ", ";
              out << emit(i.params[k], context);
            }
            out << ')';
          }
          for (Qubit q : i.qubits) out << ' ' << q;
        } else if constexpr (std::is_same_v<T, Classical>) {
          out << to_string(i.op);
          for (const auto& op : i.operands) out << ' ' << emit(op, context);
        } else if constexpr (std::is_same_v<T, Measure>) {
          out << "MEASURE " << i.qubit;
          if (i.target) out << ' ' << emit_ref(*i.target, context);
        } else if constexpr (std::is_same_v<T, Reset>) {
          out << "RESET";
          if (i.qubit) out << ' ' << *i.qubit;
        } else if constexpr (std::is_same_v<T, Label>) {
          out << "LABEL @" << i.name;
        } else if constexpr (std::is_same_v<T, Jump>) {
          out << "JUMP @" << i.target;
        } else if constexpr (std::is_same_v<T, JumpWhen>) {
          out << "JUMP-WHEN @" << i.target << ' ' << emit_ref(i.condition, context);
        } else if constexpr (std::is_same_v<T, JumpUnless>) {
          out << "JUMP-UNLESS @" << i.target << ' ' << emit_ref(i.condition, context);
        } else {
          out << "HALT";
        }
      },
      instruction.kind);
  return out.str();
}

std::string emit(const Program& program) {
  std::string out;
  for (const auto& inst : program.instructions) {
    out += emit(inst, &program);
    out += '\n';
  }
  return out;
}

double normalize(MemoryKind kind, double value) {
  if (kind == MemoryKind::Real) return value;
  constexpr double kLimit = 9.2e18;
  const double clamped = std::clamp(std::trunc(value), -kLimit, kLimit);
  const auto integer = static_cast<std::int64_t>(clamped);
  switch (kind) {
    case MemoryKind::Bit: return static_cast<double>(integer & 1);
    case MemoryKind::Octet: return static_cast<double>(integer & 0xFF);
    default: return static_cast<double>(integer);
  }
}

std::optional<double> evaluate(Opcode op, MemoryKind dest_kind, double dest, double source) {
  auto as_int = [](double v) {
    return static_cast<std::int64_t>(std::clamp(std::trunc(v), -9.2e18, 9.2e18));
  };
  double result = 0.0;
  switch (op) {
    case Opcode::Move: result = source; break;
    case Opcode::Add: result = dest + source; break;
    case Opcode::Sub: result = dest - source; break;
    case Opcode::Mul: result = dest * source; break;
    case Opcode::Div:
      if (source == 0.0) return std::nullopt;
      result = is_integral(dest_kind) ? std::trunc(dest / source) : dest / source;
      break;
    case Opcode::Neg: result = -dest; break;
    case Opcode::Not: result = static_cast<double>(~as_int(dest)); break;
    case Opcode::And: result = static_cast<double>(as_int(dest) & as_int(source)); break;
    case Opcode::Ior: result = static_cast<double>(as_int(dest) | as_int(source)); break;
    case Opcode::Xor: result = static_cast<double>(as_int(dest) ^ as_int(source)); break;
    case Opcode::Exchange: return std::nullopt;
  }
  return normalize(dest_kind, result);
}

}  // namespace quilopt
