#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcm/qstate.hpp"
#include "qcm/types.hpp"

namespace qcm {

enum class Opcode {
  Nop,
  U,
  RU,
  Swap,
  Get,
  RGet,
  Add,
  RAdd,
  Mul,
  RMul,
  Jmp,
  RJmp,
  Jcc,
  RJcc,
  JmpInd,
  RJmpInd,
};

enum class Predicate { Z, Nz, Eq, Ne, G, Le };

struct Operand {
  enum class Kind { Register, Immediate } kind = Kind::Register;
  std::string reg;
  std::uint32_t imm = 0;

  static Operand make_register(std::string name) {
    Operand o;
    o.kind = Kind::Register;
    o.reg = std::move(name);
    return o;
  }
  static Operand make_immediate(std::uint32_t value) {
    Operand o;
    o.kind = Kind::Immediate;
    o.imm = value;
    return o;
  }
  bool operator==(const Operand&) const = default;
};

struct Instruction {
  Opcode op = Opcode::Nop;
  Predicate pred = Predicate::Z;        // meaningful for Jcc/RJcc
  Gate gate = Gate::H;                  // meaningful for U/RU
  std::optional<std::int32_t> offset;   // resolved signed offset for Jmp/RJmp/Jcc/RJcc
  std::vector<Operand> operands;        // value operands in listing order

  bool operator==(const Instruction&) const = default;
};

// A parsed program. Lines are 1-indexed: instructions[i] is line i+1's... no:
// instructions[0] is line 1. Labels map to 1-based line numbers. Two programs
// compare equal on semantic content (word size, instructions, register set,
// zeroed-register declarations); label names are assembly-time sugar and are
// not part of the comparison.
struct Program {
  std::uint32_t word_size = 0;
  std::vector<Instruction> instructions;
  std::map<std::string, std::uint32_t> labels;
  std::vector<std::string> register_names;
  std::vector<std::string> z_in;   // registers required to be 0 at start
  std::vector<std::string> z_out;  // registers required to be 0 at end

  std::uint32_t length() const { return static_cast<std::uint32_t>(instructions.size()); }

  friend bool operator==(const Program& a, const Program& b) {
    return a.word_size == b.word_size && a.instructions == b.instructions &&
           a.register_names == b.register_names && a.z_in == b.z_in && a.z_out == b.z_out;
  }
};

// Signed offset carried by a jump at line `jump_line` referring to label line
// `label_line` (both 1-based). Forward jumps add the offset to br; a reverse
// jump at line i referring to label j carries the offset its matching forward
// jump (sitting at line j, targeting line i) would have added, and the machine
// subtracts it.
std::int32_t resolve_offset(std::uint32_t jump_line, std::uint32_t label_line, bool reverse);

// Parses assembly text. Grammar per line:
//   [ident ":"] [mnemonic operand*] [";" comment]
// plus header directives ".registers a b", ".in a b", ".out a". Without a
// .registers directive, registers are collected in first-appearance order.
// Throws ParseError (with the offending 1-based source line).
Program parse_program(const std::string& text, std::uint32_t word_size);

// Canonical text for one instruction, e.g. "jz +3 r1", "add y $1", "nop".
// Identical instructions on different lines share this identifier; it is also
// what the machine's `in` register holds after a fetch.
std::string encode_instruction(const Instruction& instr);

// Canonical listing: directives followed by one encoded instruction per line
// (offsets resolved, labels dropped). parse_program(print_program(p)) == p.
std::string print_program(const Program& program);

// Swaps each instruction with its reverse flavor (u <-> ru, add <-> radd,
// jmp <-> rjmp, ...); nop and swap are self-inverse. Involution.
Instruction reverse_of(const Instruction& instr);

}  // namespace qcm
