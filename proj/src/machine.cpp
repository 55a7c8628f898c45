#include "qcm/machine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcm {

namespace {

std::size_t reg_index(const Program& program, const std::string& name) {
  const auto it =
      std::find(program.register_names.begin(), program.register_names.end(), name);
  if (it == program.register_names.end()) {
    throw UnknownRegister("unknown register '" + name + "'");
  }
  return static_cast<std::size_t>(it - program.register_names.begin());
}

std::uint32_t value_of(const Program& program, const BasisLabel& label, const Operand& operand) {
  if (operand.kind == Operand::Kind::Immediate) return operand.imm;
  return label.regs[reg_index(program, operand.reg)];
}

std::string term_text(const Program& program, const BasisLabel& label) {
  std::ostringstream out;
  for (std::size_t i = 0; i < program.register_names.size(); ++i) {
    if (i) out << " ";
    out << program.register_names[i] << ":" << label.regs[i];
  }
  if (label.pc) out << " pc:" << *label.pc;
  if (label.br) out << " br:" << *label.br;
  return out.str();
}

std::int64_t shift_branch(std::int64_t br, std::int64_t delta, std::uint32_t word_size) {
  return to_signed(to_word(br + delta, word_size), word_size);
}

bool predicate_holds(Predicate pred, std::uint32_t v1, std::uint32_t v2) {
  switch (pred) {
    case Predicate::Z: return v1 == 0;
    case Predicate::Nz: return v1 != 0;
    case Predicate::Eq: return v1 == v2;
    case Predicate::Ne: return v1 != v2;
    case Predicate::G: return v1 > v2;
    case Predicate::Le: return v1 <= v2;
  }
  return false;
}

bool all_branch_one(const QuantumState& state) {
  for (const auto& [label, amp] : state.terms()) {
    if (!label.br || *label.br != 1) return false;
  }
  return true;
}

void record_snapshot(MachineRun& run, const QuantumState& state) {
  switch (run.config.trace) {
    case TraceMode::Off:
      return;
    case TraceMode::EveryCycle:
      break;
    case TraceMode::Br1Only:
      if (!all_branch_one(state)) return;
      break;
  }
  run.snapshots.push_back({run.cycle, state});
}

void warn_once(MachineRun& run, const std::string& message) {
  for (const auto& w : run.warnings) {
    if (w == message) return;
  }
  run.warnings.push_back(message);
}

}  // namespace

ExecutionFault::ExecutionFault(std::uint64_t cycle_number, std::uint32_t line_number,
                               const std::string& instruction, const std::string& term,
                               const std::string& why)
    : DomainViolation("cycle " + std::to_string(cycle_number) + ", line " +
                      std::to_string(line_number) + " '" + instruction + "': " + why +
                      " [term " + term + "]"),
      cycle(cycle_number),
      line(line_number),
      instruction_text(instruction),
      term_text(term),
      reason(why) {}

std::vector<std::pair<BasisLabel, Amplitude>> execute_semantics(const Program& program,
                                                                const Instruction& instr,
                                                                const BasisLabel& label,
                                                                const Amplitude& amp) {
  const std::uint32_t k = program.word_size;
  BasisLabel next = label;
  switch (instr.op) {
    case Opcode::Nop:
      break;

    case Opcode::U:
    case Opcode::RU: {
      const std::size_t a = reg_index(program, instr.operands[0].reg);
      const bool adjoint = instr.op == Opcode::RU;
      std::vector<std::pair<BasisLabel, Amplitude>> out;
      for (const auto& [value, factor] : apply_single_bit_gate(label.regs[a], 0, instr.gate, adjoint)) {
        BasisLabel branch = label;
        branch.regs[a] = value;
        out.emplace_back(std::move(branch), amp * factor);
      }
      return out;
    }

    case Opcode::Swap: {
      const std::size_t a = reg_index(program, instr.operands[0].reg);
      const std::size_t b = reg_index(program, instr.operands[1].reg);
      std::swap(next.regs[a], next.regs[b]);
      break;
    }

    case Opcode::Get: {
      const std::uint32_t i = value_of(program, label, instr.operands[0]);
      const std::size_t b = reg_index(program, instr.operands[1].reg);
      const std::size_t c = reg_index(program, instr.operands[2].reg);
      if (i >= k) {
        throw DomainViolation("bit index " + std::to_string(i) + " out of range for word size " +
                              std::to_string(k));
      }
      if (label.regs[b] != 0) {
        throw DomainViolation("destination register " + instr.operands[1].reg +
                              " must hold 0 (holds " + std::to_string(label.regs[b]) + ")");
      }
      next.regs[b] = (label.regs[c] >> i) & 1u;
      next.regs[c] = label.regs[c] & ~(1u << i);
      break;
    }

    case Opcode::RGet: {
      const std::uint32_t i = value_of(program, label, instr.operands[0]);
      const std::size_t b = reg_index(program, instr.operands[1].reg);
      const std::size_t c = reg_index(program, instr.operands[2].reg);
      if (i >= k) {
        throw DomainViolation("bit index " + std::to_string(i) + " out of range for word size " +
                              std::to_string(k));
      }
      if (label.regs[b] > 1) {
        throw DomainViolation("source register " + instr.operands[1].reg +
                              " must hold 0 or 1 (holds " + std::to_string(label.regs[b]) + ")");
      }
      if ((label.regs[c] >> i) & 1u) {
        throw DomainViolation("bit " + std::to_string(i) + " of " + instr.operands[2].reg +
                              " must be clear before it can be deposited into");
      }
      next.regs[c] = label.regs[c] | (label.regs[b] << i);
      next.regs[b] = 0;
      break;
    }

    case Opcode::Add:
    case Opcode::RAdd: {
      const bool reverse = instr.op == Opcode::RAdd;
      const std::size_t a = reg_index(program, instr.operands[0].reg);
      const bool self = instr.operands[1].kind == Operand::Kind::Register &&
                        instr.operands[1].reg == instr.operands[0].reg;
      if (self) {
        // a += a doubles; its reverse halves. Defined only where invertible.
        if (!reverse) {
          if (label.regs[a] >> (k - 1)) {
            throw DomainViolation("doubling " + instr.operands[0].reg + " = " +
                                  std::to_string(label.regs[a]) + " overflows word size " +
                                  std::to_string(k));
          }
          next.regs[a] = label.regs[a] << 1;
        } else {
          if (label.regs[a] & 1u) {
            throw DomainViolation("halving requires " + instr.operands[0].reg +
                                  " to be even (holds " + std::to_string(label.regs[a]) + ")");
          }
          next.regs[a] = label.regs[a] >> 1;
        }
      } else {
        const std::int64_t v = value_of(program, label, instr.operands[1]);
        const std::int64_t delta = reverse ? -v : v;
        next.regs[a] = to_word(static_cast<std::int64_t>(label.regs[a]) + delta, k);
      }
      break;
    }

    case Opcode::Mul:
    case Opcode::RMul: {
      const bool reverse = instr.op == Opcode::RMul;
      const std::size_t a = reg_index(program, instr.operands[0].reg);
      const bool self = instr.operands[1].kind == Operand::Kind::Register &&
                        instr.operands[1].reg == instr.operands[0].reg;
      if (self) {
        // a *= a squares; its reverse takes the square root.
        if (!reverse) {
          const std::uint64_t square =
              static_cast<std::uint64_t>(label.regs[a]) * label.regs[a];
          if (square >= word_count(k)) {
            throw DomainViolation("squaring " + instr.operands[0].reg + " = " +
                                  std::to_string(label.regs[a]) + " overflows word size " +
                                  std::to_string(k));
          }
          next.regs[a] = static_cast<std::uint32_t>(square);
        } else {
          const auto root = static_cast<std::uint32_t>(std::lround(std::sqrt(label.regs[a])));
          if (root * root != label.regs[a]) {
            throw DomainViolation(instr.operands[0].reg + " = " + std::to_string(label.regs[a]) +
                                  " is not a perfect square");
          }
          next.regs[a] = root;
        }
      } else {
        const std::uint32_t v = value_of(program, label, instr.operands[1]);
        if (v == 0) {
          throw DomainViolation("multiplication by 0 is not invertible");
        }
        if (!reverse) {
          const std::uint64_t product = static_cast<std::uint64_t>(label.regs[a]) * v;
          if (product >= word_count(k)) {
            throw DomainViolation("product " + std::to_string(product) +
                                  " overflows word size " + std::to_string(k));
          }
          next.regs[a] = static_cast<std::uint32_t>(product);
        } else {
          if (label.regs[a] % v != 0) {
            throw DomainViolation(std::to_string(v) + " does not divide " +
                                  instr.operands[0].reg + " = " +
                                  std::to_string(label.regs[a]));
          }
          next.regs[a] = label.regs[a] / v;
        }
      }
      break;
    }

    case Opcode::Jmp:
      next.br = shift_branch(*label.br, *instr.offset, k);
      break;
    case Opcode::RJmp:
      next.br = shift_branch(*label.br, -static_cast<std::int64_t>(*instr.offset), k);
      break;

    case Opcode::Jcc:
    case Opcode::RJcc: {
      const std::uint32_t v1 = value_of(program, label, instr.operands[0]);
      const std::uint32_t v2 =
          instr.operands.size() > 1 ? value_of(program, label, instr.operands[1]) : 0;
      if (predicate_holds(instr.pred, v1, v2)) {
        const std::int64_t delta = instr.op == Opcode::Jcc
                                       ? static_cast<std::int64_t>(*instr.offset)
                                       : -static_cast<std::int64_t>(*instr.offset);
        next.br = shift_branch(*label.br, delta, k);
      }
      break;
    }

    case Opcode::JmpInd:
    case Opcode::RJmpInd: {
      const std::int64_t v = value_of(program, label, instr.operands[0]);
      const std::int64_t delta = instr.op == Opcode::JmpInd ? v : -v;
      next.br = shift_branch(*label.br, delta, k);
      break;
    }
  }
  return {{std::move(next), amp}};
}

MachineRun init_run(const Program& program, const QuantumState& input,
                    const MachineConfig& config) {
  MachineRun run;
  run.program = program;
  run.config = config;
  run.state = QuantumState(program.word_size, program.register_names);

  // Map the input's register layout onto the program's, zero-filling
  // registers the input does not mention.
  std::vector<std::size_t> slot(input.register_names().size());
  for (std::size_t i = 0; i < input.register_names().size(); ++i) {
    slot[i] = reg_index(program, input.register_names()[i]);
  }
  std::vector<std::size_t> z_in_slots;
  for (const auto& name : program.z_in) z_in_slots.push_back(reg_index(program, name));

  for (const auto& [label, amp] : input.terms()) {
    if (label.pc || label.br || label.in || label.history) {
      throw DomainViolation("input states assign data registers only (pc, br and the "
                            "instruction latch are fixed by the machine)");
    }
    BasisLabel mapped;
    mapped.regs.assign(program.register_names.size(), 0);
    for (std::size_t i = 0; i < slot.size(); ++i) {
      if (label.regs[i] > word_mask(program.word_size)) {
        throw DomainViolation("input value " + std::to_string(label.regs[i]) +
                              " for register '" + input.register_names()[i] +
                              "' exceeds word size " + std::to_string(program.word_size));
      }
      mapped.regs[slot[i]] = label.regs[i];
    }
    for (const std::size_t z : z_in_slots) {
      if (mapped.regs[z] != 0) {
        throw InputNotZeroed("register '" + program.register_names[z] +
                             "' must be 0 on input (holds " + std::to_string(mapped.regs[z]) +
                             ")");
      }
    }
    mapped.pc = 0;
    mapped.br = 1;
    if (config.record_pc_history) mapped.history = std::vector<std::uint32_t>{};
    run.state.accumulate(mapped, amp);
  }
  run.state.prune();

  const double n = norm(run.state);
  if (n < kPruneThreshold) {
    throw UnnormalizedInput("input state has zero norm");
  }
  if (std::abs(n - 1.0) > kInputNormWarning) {
    std::ostringstream msg;
    msg << "input renormalized (squared norm was " << n << ")";
    run.warnings.push_back(msg.str());
  }
  if (std::abs(n - 1.0) > kNormTolerance) {
    const double scale = 1.0 / std::sqrt(n);
    QuantumState scaled(program.word_size, program.register_names);
    for (const auto& [label, amp] : run.state.terms()) scaled.accumulate(label, amp * scale);
    run.state = scaled;
  }

  record_snapshot(run, run.state);
  return run;
}

MachineRun init_run(const Program& program, const std::map<std::string, std::uint32_t>& values,
                    const MachineConfig& config) {
  QuantumState input(program.word_size, program.register_names);
  BasisLabel label;
  label.regs.assign(program.register_names.size(), 0);
  for (const auto& [name, value] : values) {
    label.regs[reg_index(program, name)] = value;
  }
  input.accumulate(label, 1.0);
  return init_run(program, input, config);
}

QuantumState apply_fetch(const Program& program, const QuantumState& state,
                         bool record_pc_history, bool* saw_zero_branch) {
  const std::uint32_t k = program.word_size;
  QuantumState fetched(k, program.register_names);
  for (const auto& [label, amp] : state.terms()) {
    if (saw_zero_branch && *label.br == 0) *saw_zero_branch = true;
    BasisLabel next = label;
    const std::uint32_t pc = to_word(static_cast<std::int64_t>(*label.pc) + *label.br, k);
    next.pc = pc;
    if (pc >= 1 && pc <= program.length()) {
      next.in = encode_instruction(program.instructions[pc - 1]);
    } else {
      next.in.reset();
    }
    if (record_pc_history) {
      std::vector<std::uint32_t> history =
          label.history ? *label.history : std::vector<std::uint32_t>{};
      history.insert(history.begin(), *label.pc);
      next.history = std::move(history);
    }
    fetched.accumulate(next, amp);
  }
  fetched.prune();
  return fetched;
}

QuantumState apply_execute(const Program& program, const QuantumState& state) {
  QuantumState executed(program.word_size, program.register_names);
  for (const auto& [label, amp] : state.terms()) {
    if (!label.in) {
      executed.accumulate(label, amp);
      continue;
    }
    const Instruction& instr = program.instructions[*label.pc - 1];
    try {
      for (auto& [succ, a] : execute_semantics(program, instr, label, amp)) {
        executed.accumulate(succ, a);
      }
    } catch (const ExecutionFault&) {
      throw;
    } catch (const DomainViolation& fault) {
      throw ExecutionFault(0, *label.pc, *label.in, term_text(program, label), fault.what());
    }
  }
  executed.prune();
  return executed;
}

QuantumState apply_retire(const QuantumState& state) {
  QuantumState retired(state.word_size(), state.register_names());
  for (const auto& [label, amp] : state.terms()) {
    BasisLabel next = label;
    next.in.reset();
    retired.accumulate(next, amp);
  }
  retired.prune();
  return retired;
}

QuantumState advance_one_cycle(const Program& program, const QuantumState& state,
                               bool record_pc_history) {
  return apply_retire(apply_execute(program, apply_fetch(program, state, record_pc_history)));
}

void step_cycle(MachineRun& run) {
  bool saw_zero_branch = false;
  QuantumState fetched =
      apply_fetch(run.program, run.state, run.config.record_pc_history, &saw_zero_branch);
  run.cycle += 1;
  if (saw_zero_branch) {
    warn_once(run, "a term reached branch offset 0: its pc no longer advances");
  }
  record_snapshot(run, fetched);

  QuantumState retired;
  try {
    retired = apply_retire(apply_execute(run.program, fetched));
  } catch (const ExecutionFault& fault) {
    throw ExecutionFault(run.cycle, fault.line, fault.instruction_text, fault.term_text,
                         fault.reason);
  }

  const double n = norm(retired);
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw UnnormalizedState("machine state norm drifted to " + std::to_string(n) + " at cycle " +
                            std::to_string(run.cycle));
  }
  run.state = std::move(retired);
}

void run_machine(MachineRun& run, std::uint64_t cycles) {
  for (std::uint64_t i = 0; i < cycles; ++i) step_cycle(run);
}

const std::vector<Snapshot>& trace(const MachineRun& run) {
  if (run.config.trace == TraceMode::Off) {
    throw TraceUnavailable("the run was not configured to record a trace");
  }
  return run.snapshots;
}

}  // namespace qcm
