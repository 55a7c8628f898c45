#include "qcm/isa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace qcm {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), is_ident_char);
}

struct Mnemonic {
  Opcode op;
  std::optional<Predicate> pred;
};

std::optional<Mnemonic> mnemonic_from_string(const std::string& s) {
  static const std::map<std::string, Mnemonic> table = {
      {"nop", {Opcode::Nop, {}}},       {"u", {Opcode::U, {}}},
      {"ru", {Opcode::RU, {}}},         {"swap", {Opcode::Swap, {}}},
      {"get", {Opcode::Get, {}}},       {"rget", {Opcode::RGet, {}}},
      {"add", {Opcode::Add, {}}},       {"radd", {Opcode::RAdd, {}}},
      {"mul", {Opcode::Mul, {}}},       {"rmul", {Opcode::RMul, {}}},
      {"jmp", {Opcode::Jmp, {}}},       {"rjmp", {Opcode::RJmp, {}}},
      {"jmp*", {Opcode::JmpInd, {}}},   {"rjmp*", {Opcode::RJmpInd, {}}},
      {"jz", {Opcode::Jcc, Predicate::Z}},    {"rjz", {Opcode::RJcc, Predicate::Z}},
      {"jnz", {Opcode::Jcc, Predicate::Nz}},  {"rjnz", {Opcode::RJcc, Predicate::Nz}},
      {"jeq", {Opcode::Jcc, Predicate::Eq}},  {"rjeq", {Opcode::RJcc, Predicate::Eq}},
      {"jne", {Opcode::Jcc, Predicate::Ne}},  {"rjne", {Opcode::RJcc, Predicate::Ne}},
      {"jg", {Opcode::Jcc, Predicate::G}},    {"rjg", {Opcode::RJcc, Predicate::G}},
      {"jle", {Opcode::Jcc, Predicate::Le}},  {"rjle", {Opcode::RJcc, Predicate::Le}},
  };
  const auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string predicate_suffix(Predicate p) {
  switch (p) {
    case Predicate::Z: return "z";
    case Predicate::Nz: return "nz";
    case Predicate::Eq: return "eq";
    case Predicate::Ne: return "ne";
    case Predicate::G: return "g";
    case Predicate::Le: return "le";
  }
  return "?";
}

bool predicate_is_unary(Predicate p) { return p == Predicate::Z || p == Predicate::Nz; }

// One source line after tokenization.
struct RawLine {
  int source_line = 0;
  std::optional<std::string> label;
  std::vector<std::string> tokens;  // mnemonic followed by operand tokens
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct JumpTarget {
  std::optional<std::string> label;  // symbolic target, resolved in pass 2
  std::optional<std::int64_t> numeric;
};

}  // namespace

std::int32_t resolve_offset(std::uint32_t jump_line, std::uint32_t label_line, bool reverse) {
  const std::int64_t p = reverse
                             ? static_cast<std::int64_t>(jump_line) - label_line - 1
                             : static_cast<std::int64_t>(label_line) - jump_line - 1;
  return static_cast<std::int32_t>(p);
}

Program parse_program(const std::string& text, std::uint32_t word_size) {
  if (word_size < kMinWordSize || word_size > kMaxWordSize) {
    throw ParseError("word size must be between " + std::to_string(kMinWordSize) + " and " +
                     std::to_string(kMaxWordSize));
  }
  Program program;
  program.word_size = word_size;

  std::vector<RawLine> raw;
  bool declared_registers = false;
  bool seen_instruction = false;
  std::optional<std::string> pending_label;

  // Pass 1: strip comments, collect directives, labels and instruction tokens.
  std::istringstream stream(text);
  std::string line;
  int source_line = 0;
  while (std::getline(stream, line)) {
    ++source_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto comment = line.find(';'); comment != std::string::npos) {
      line.erase(comment);
    }
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (tokens[0][0] == '.') {
      if (seen_instruction) {
        throw ParseError(source_line, "directive '" + tokens[0] + "' must precede instructions");
      }
      const std::string directive = tokens[0];
      std::vector<std::string>* target = nullptr;
      if (directive == ".registers") {
        if (declared_registers) throw ParseError(source_line, "duplicate .registers directive");
        declared_registers = true;
        target = &program.register_names;
      } else if (directive == ".in") {
        target = &program.z_in;
      } else if (directive == ".out") {
        target = &program.z_out;
      } else {
        throw ParseError(source_line, "unknown directive '" + directive + "'");
      }
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (!is_identifier(tokens[i])) {
          throw ParseError(source_line, "bad register name '" + tokens[i] + "'");
        }
        if (tokens[i] == "pc" || tokens[i] == "br" || tokens[i] == "in") {
          throw ParseError(source_line, "'" + tokens[i] + "' is a reserved name");
        }
        if (std::find(target->begin(), target->end(), tokens[i]) != target->end()) {
          throw ParseError(source_line, "duplicate register '" + tokens[i] + "' in " + directive);
        }
        target->push_back(tokens[i]);
      }
      continue;
    }

    RawLine rl;
    rl.source_line = source_line;
    std::size_t first = 0;
    if (tokens[0].size() > 1 && tokens[0].back() == ':') {
      const std::string label = tokens[0].substr(0, tokens[0].size() - 1);
      if (!is_identifier(label)) throw ParseError(source_line, "bad label '" + label + "'");
      if (pending_label) {
        throw ParseError(source_line, "label '" + label + "' follows an unattached label");
      }
      rl.label = label;
      first = 1;
    }
    if (first >= tokens.size()) {
      // Label-only line: the label binds to the next instruction.
      pending_label = rl.label;
      continue;
    }
    if (pending_label) {
      if (rl.label) throw ParseError(source_line, "instruction carries two labels");
      rl.label = pending_label;
      pending_label.reset();
    }
    rl.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(first), tokens.end());
    seen_instruction = true;
    raw.push_back(std::move(rl));
  }
  if (pending_label) {
    throw ParseError("label '" + *pending_label + "' is not attached to an instruction");
  }

  const std::uint32_t length = static_cast<std::uint32_t>(raw.size());
  if (length < 2) {
    throw ParseError("program must contain at least 2 instructions (got " +
                     std::to_string(length) + ")");
  }
  if (length >= word_count(word_size)) {
    throw ParseError("program length " + std::to_string(length) +
                     " does not fit the address space of word size " + std::to_string(word_size));
  }

  for (std::uint32_t i = 0; i < length; ++i) {
    if (raw[i].label) {
      const auto [it, inserted] = program.labels.emplace(*raw[i].label, i + 1);
      if (!inserted) throw ParseError(raw[i].source_line, "duplicate label '" + *raw[i].label + "'");
    }
  }

  const std::uint32_t max_immediate = word_mask(word_size);
  const std::int64_t max_offset = static_cast<std::int64_t>(word_mask(word_size));

  auto touch_register = [&](const std::string& name, int src_line) {
    if (name == "pc" || name == "br" || name == "in") {
      throw ParseError(src_line, "'" + name + "' is a reserved name");
    }
    const auto it = std::find(program.register_names.begin(), program.register_names.end(), name);
    if (it == program.register_names.end()) {
      if (declared_registers) {
        throw ParseError(src_line, "register '" + name + "' is not declared by .registers");
      }
      program.register_names.push_back(name);
    }
  };

  auto parse_value_operand = [&](const std::string& tok, int src_line) -> Operand {
    if (!tok.empty() && tok[0] == '$') {
      const std::string digits = tok.substr(1);
      if (digits.empty() ||
          !std::all_of(digits.begin(), digits.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw ParseError(src_line, "bad immediate '" + tok + "'");
      }
      const unsigned long value = std::strtoul(digits.c_str(), nullptr, 10);
      if (value > max_immediate) {
        throw ParseError(src_line, "immediate " + tok + " out of range for word size " +
                                       std::to_string(word_size));
      }
      return Operand::make_immediate(static_cast<std::uint32_t>(value));
    }
    if (!is_identifier(tok)) throw ParseError(src_line, "bad operand '" + tok + "'");
    touch_register(tok, src_line);
    return Operand::make_register(tok);
  };

  auto parse_register_operand = [&](const std::string& tok, int src_line) -> Operand {
    Operand op = parse_value_operand(tok, src_line);
    if (op.kind != Operand::Kind::Register) {
      throw ParseError(src_line, "operand '" + tok + "' must be a register");
    }
    return op;
  };

  auto parse_jump_target = [&](const std::string& tok, int src_line) -> JumpTarget {
    JumpTarget t;
    if (is_identifier(tok)) {
      t.label = tok;
      return t;
    }
    std::size_t pos = 0;
    if (tok[0] == '+' || tok[0] == '-') pos = 1;
    if (pos >= tok.size() ||
        !std::all_of(tok.begin() + static_cast<std::ptrdiff_t>(pos), tok.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError(src_line, "bad jump target '" + tok + "'");
    }
    t.numeric = std::strtoll(tok.c_str(), nullptr, 10);
    if (std::llabs(*t.numeric) > max_offset) {
      throw OffsetOverflow(src_line, "offset " + tok + " is not representable at word size " +
                                         std::to_string(word_size));
    }
    return t;
  };

  // Pass 2: build instructions with resolved offsets.
  for (std::uint32_t i = 0; i < length; ++i) {
    const RawLine& rl = raw[i];
    const std::uint32_t line_number = i + 1;
    const std::string& mnemonic = rl.tokens[0];
    const auto m = mnemonic_from_string(mnemonic);
    if (!m) throw ParseError(rl.source_line, "unknown mnemonic '" + mnemonic + "'");

    Instruction instr;
    instr.op = m->op;
    if (m->pred) instr.pred = *m->pred;
    const std::vector<std::string> args(rl.tokens.begin() + 1, rl.tokens.end());
    auto expect_args = [&](std::size_t n) {
      if (args.size() != n) {
        throw ParseError(rl.source_line, "'" + mnemonic + "' expects " + std::to_string(n) +
                                             " operand(s), got " + std::to_string(args.size()));
      }
    };

    auto resolve_target = [&](const std::string& tok, bool reverse) -> std::int32_t {
      const JumpTarget target = parse_jump_target(tok, rl.source_line);
      if (target.numeric) return static_cast<std::int32_t>(*target.numeric);
      const auto it = program.labels.find(*target.label);
      if (it == program.labels.end()) {
        throw ParseError(rl.source_line, "undefined label '" + *target.label + "'");
      }
      return resolve_offset(line_number, it->second, reverse);
    };

    switch (instr.op) {
      case Opcode::Nop:
        expect_args(0);
        break;
      case Opcode::U:
      case Opcode::RU: {
        expect_args(2);
        const auto gate = gate_from_name(args[0]);
        if (!gate) throw ParseError(rl.source_line, "unknown gate '" + args[0] + "'");
        instr.gate = *gate;
        instr.operands.push_back(parse_register_operand(args[1], rl.source_line));
        break;
      }
      case Opcode::Swap:
        expect_args(2);
        instr.operands.push_back(parse_register_operand(args[0], rl.source_line));
        instr.operands.push_back(parse_register_operand(args[1], rl.source_line));
        break;
      case Opcode::Get:
      case Opcode::RGet: {
        expect_args(3);
        instr.operands.push_back(parse_value_operand(args[0], rl.source_line));
        instr.operands.push_back(parse_register_operand(args[1], rl.source_line));
        instr.operands.push_back(parse_register_operand(args[2], rl.source_line));
        // The bit destination and the word register must be distinct, and
        // neither may double as the index register.
        const auto& ops = instr.operands;
        if (ops[1].reg == ops[2].reg ||
            (ops[0].kind == Operand::Kind::Register &&
             (ops[0].reg == ops[1].reg || ops[0].reg == ops[2].reg))) {
          throw ParseError(rl.source_line, "'" + mnemonic + "' operands must be distinct registers");
        }
        break;
      }
      case Opcode::Add:
      case Opcode::RAdd:
      case Opcode::Mul:
      case Opcode::RMul:
        expect_args(2);
        instr.operands.push_back(parse_register_operand(args[0], rl.source_line));
        instr.operands.push_back(parse_value_operand(args[1], rl.source_line));
        break;
      case Opcode::Jmp:
        expect_args(1);
        instr.offset = resolve_target(args[0], false);
        break;
      case Opcode::RJmp:
        expect_args(1);
        instr.offset = resolve_target(args[0], true);
        break;
      case Opcode::Jcc:
      case Opcode::RJcc: {
        const std::size_t values = predicate_is_unary(instr.pred) ? 1 : 2;
        expect_args(1 + values);
        instr.offset = resolve_target(args[0], instr.op == Opcode::RJcc);
        for (std::size_t v = 0; v < values; ++v) {
          instr.operands.push_back(parse_value_operand(args[1 + v], rl.source_line));
        }
        break;
      }
      case Opcode::JmpInd:
      case Opcode::RJmpInd:
        expect_args(1);
        instr.operands.push_back(parse_value_operand(args[0], rl.source_line));
        break;
    }
    program.instructions.push_back(std::move(instr));
  }
  for (const auto& name : program.z_in) {
    if (std::find(program.register_names.begin(), program.register_names.end(), name) ==
        program.register_names.end()) {
      throw ParseError(".in names undeclared register '" + name + "'");
    }
  }
  for (const auto& name : program.z_out) {
    if (std::find(program.register_names.begin(), program.register_names.end(), name) ==
        program.register_names.end()) {
      throw ParseError(".out names undeclared register '" + name + "'");
    }
  }
  return program;
}

std::string encode_instruction(const Instruction& instr) {
  std::string mnemonic;
  switch (instr.op) {
    case Opcode::Nop: mnemonic = "nop"; break;
    case Opcode::U: mnemonic = "u"; break;
    case Opcode::RU: mnemonic = "ru"; break;
    case Opcode::Swap: mnemonic = "swap"; break;
    case Opcode::Get: mnemonic = "get"; break;
    case Opcode::RGet: mnemonic = "rget"; break;
    case Opcode::Add: mnemonic = "add"; break;
    case Opcode::RAdd: mnemonic = "radd"; break;
    case Opcode::Mul: mnemonic = "mul"; break;
    case Opcode::RMul: mnemonic = "rmul"; break;
    case Opcode::Jmp: mnemonic = "jmp"; break;
    case Opcode::RJmp: mnemonic = "rjmp"; break;
    case Opcode::Jcc: mnemonic = "j" + predicate_suffix(instr.pred); break;
    case Opcode::RJcc: mnemonic = "rj" + predicate_suffix(instr.pred); break;
    case Opcode::JmpInd: mnemonic = "jmp*"; break;
    case Opcode::RJmpInd: mnemonic = "rjmp*"; break;
  }
  std::string out = mnemonic;
  if (instr.op == Opcode::U || instr.op == Opcode::RU) {
    out += " " + gate_name(instr.gate);
  }
  if (instr.offset) {
    out += (*instr.offset >= 0 ? " +" : " ") + std::to_string(*instr.offset);
  }
  for (const auto& operand : instr.operands) {
    if (operand.kind == Operand::Kind::Immediate) {
      out += " $" + std::to_string(operand.imm);
    } else {
      out += " " + operand.reg;
    }
  }
  return out;
}

std::string print_program(const Program& program) {
  std::string out;
  auto emit_directive = [&](const std::string& name, const std::vector<std::string>& regs) {
    if (regs.empty()) return;
    out += name;
    for (const auto& r : regs) out += " " + r;
    out += "\n";
  };
  emit_directive(".registers", program.register_names);
  emit_directive(".in", program.z_in);
  emit_directive(".out", program.z_out);
  for (const auto& instr : program.instructions) {
    out += encode_instruction(instr);
    out += "\n";
  }
  return out;
}

Instruction reverse_of(const Instruction& instr) {
  Instruction out = instr;
  switch (instr.op) {
    case Opcode::Nop: break;
    case Opcode::Swap: break;
    case Opcode::U: out.op = Opcode::RU; break;
    case Opcode::RU: out.op = Opcode::U; break;
    case Opcode::Get: out.op = Opcode::RGet; break;
    case Opcode::RGet: out.op = Opcode::Get; break;
    case Opcode::Add: out.op = Opcode::RAdd; break;
    case Opcode::RAdd: out.op = Opcode::Add; break;
    case Opcode::Mul: out.op = Opcode::RMul; break;
    case Opcode::RMul: out.op = Opcode::Mul; break;
    case Opcode::Jmp: out.op = Opcode::RJmp; break;
    case Opcode::RJmp: out.op = Opcode::Jmp; break;
    case Opcode::Jcc: out.op = Opcode::RJcc; break;
    case Opcode::RJcc: out.op = Opcode::Jcc; break;
    case Opcode::JmpInd: out.op = Opcode::RJmpInd; break;
    case Opcode::RJmpInd: out.op = Opcode::JmpInd; break;
  }
  return out;
}

}  // namespace qcm
