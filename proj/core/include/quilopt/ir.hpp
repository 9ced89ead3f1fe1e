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

#ifndef QUILOPT_IR_HPP_
#define QUILOPT_IR_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace quilopt {

// Memory -------------------------------------------------------------------

enum class MemoryKind { Bit, Octet, Integer, Real };

std::string_view to_string(MemoryKind kind);
bool is_integral(MemoryKind kind);

struct MemoryRegion {
  std::string name;
  MemoryKind kind = MemoryKind::Bit;
  std::size_t length = 1;
  // "DECLARE a BIT[1]" and "DECLARE a BIT" describe the same storage; the
  // flag only records which spelling to emit. Not part of equality.
  bool array_syntax = false;

  bool operator==(const MemoryRegion& other) const {
    return name == other.name && kind == other.kind && length == other.length;
  }
};

struct MemoryRef {
  std::string region;
  std::size_t index = 0;

  auto operator<=>(const MemoryRef&) const = default;
};

// A numeric literal. `integral` selects integer spelling on emit and is the
// literal's type for DECLARE'd INTEGER/BIT/OCTET destinations.
struct Literal {
  double value = 0.0;
  bool integral = false;

  bool operator==(const Literal& other) const {
    return value == other.value && integral == other.integral;
  }
};

using Operand = std::variant<MemoryRef, Literal>;

inline bool is_ref(const Operand& op) {
  return std::holds_alternative<MemoryRef>(op);
}

using Qubit = std::uint32_t;

// Instructions ---------------------------------------------------------------

enum class Opcode { Move, Exchange, Add, Sub, Mul, Div, Neg, Not, And, Ior, Xor };

std::string_view to_string(Opcode op);
std::optional<Opcode> opcode_from_string(std::string_view text);
std::size_t operand_count(Opcode op);

struct Declare {
  MemoryRegion region;
  bool operator==(const Declare&) const = default;
};

// Fixed and parameterized gate applications share one representation; a gate
// is parameterized iff at least one parameter is a memory reference.
struct Gate {
  std::string name;
  std::vector<Operand> params;
  std::vector<Qubit> qubits;

  bool is_parameterized() const;
  bool operator==(const Gate&) const = default;
};

struct Classical {
  Opcode op = Opcode::Move;
  // operands[0] is always a MemoryRef (the destination).
  std::vector<Operand> operands;
  bool operator==(const Classical&) const = default;
};

struct Measure {
  Qubit qubit = 0;
  std::optional<MemoryRef> target;
  bool operator==(const Measure&) const = default;
};

struct Reset {
  std::optional<Qubit> qubit;
  bool operator==(const Reset&) const = default;
};

struct Label {
  std::string name;
  bool operator==(const Label&) const = default;
};

struct Jump {
  std::string target;
  bool operator==(const Jump&) const = default;
};

struct JumpWhen {
  std::string target;
  MemoryRef condition;
  bool operator==(const JumpWhen&) const = default;
};

struct JumpUnless {
  std::string target;
  MemoryRef condition;
  bool operator==(const JumpUnless&) const = default;
};

struct Halt {
  bool operator==(const Halt&) const = default;
};

using InstructionKind = std::variant<Declare, Gate, Classical, Measure, Reset,
                                     Label, Jump, JumpWhen, JumpUnless, Halt>;

struct Instruction {
  InstructionKind kind;
  std::size_t source_line = 0;

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(kind);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(kind);
  }
  template <typename T>
  T& as() {
    return std::get<T>(kind);
  }

  bool is_conditional_jump() const { return is<JumpWhen>() || is<JumpUnless>(); }

  // Source position is provenance, not structure.
  bool operator==(const Instruction& other) const { return kind == other.kind; }
};

enum class DeviceClass { Quantum, Classical, Hybrid };

std::string_view to_string(DeviceClass device);

DeviceClass classify(const Instruction& instruction);

// Resources ------------------------------------------------------------------

struct CellId {
  std::string region;
  std::size_t index = 0;
  auto operator<=>(const CellId&) const = default;
};

struct QubitId {
  Qubit index = 0;
  auto operator<=>(const QubitId&) const = default;
};

using Resource = std::variant<CellId, QubitId>;

struct ResourceSets {
  std::set<Resource> reads;
  std::set<Resource> writes;
};

// A bare RESET writes every qubit in `universe` (usually Program::qubits()).
ResourceSets resources(const Instruction& instruction,
                       const std::set<Qubit>* universe = nullptr);

bool conflicts(const ResourceSets& a, const ResourceSets& b);

// Program --------------------------------------------------------------------

struct Program {
  std::vector<MemoryRegion> regions;
  std::vector<Instruction> instructions;
  std::set<std::string> readout;

  const MemoryRegion* find_region(std::string_view name) const;
  std::set<Qubit> qubits() const;

  bool operator==(const Program& other) const {
    return regions == other.regions && instructions == other.instructions &&
           readout == other.readout;
  }
};

class QuilError : public std::runtime_error {
 public:
  QuilError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Readout regions default to "ro" when declared, otherwise every region.
std::set<std::string> default_readout(const std::vector<MemoryRegion>& regions);

Program parse(std::string_view text);

// Checks references, label uniqueness, jump targets, gate arity and readout
// names. Throws QuilError on the first violation.
void validate(const Program& program);

// Rebuilds `regions` from the program's Declare instructions, keeping only
// readout names that still resolve.
void refresh_regions(Program& program);

// `context` picks "m" over "m[0]" for regions declared without brackets.
std::string emit(const Instruction& instruction, const Program* context = nullptr);
std::string emit(const Operand& operand, const Program* context = nullptr);
std::string emit(const Program& program);
std::string emit_literal(const Literal& literal);

// Gate table -----------------------------------------------------------------

struct GateSignature {
  std::string_view name;
  std::size_t params;
  std::size_t qubits;
};

const GateSignature* find_gate(std::string_view name);

// Classical semantics --------------------------------------------------------

// Coerces a value into the representable range of a memory kind: BIT keeps the
// low bit, OCTET the low byte, INTEGER truncates toward zero, REAL passes
// through.
double normalize(MemoryKind kind, double value);

// Evaluates `dest := dest <op> source` (or the unary form) for every opcode
// except EXCHANGE. Returns nullopt on division by zero.
std::optional<double> evaluate(Opcode op, MemoryKind dest_kind, double dest,
                               double source);

}  // namespace quilopt

#endif  // QUILOPT_IR_HPP_
