#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcm/qstate.hpp"
#include "qcm/types.hpp"

namespace qcm {

// A conventional assembly language whose conditional jump rewrites pc
// directly (absolute targets), used to demonstrate why that design cannot be
// lifted to superposition.
enum class ClassicalOpcode { Jnz, Jmp, Add, Nop };

struct ClassicalInstruction {
  ClassicalOpcode op = ClassicalOpcode::Nop;
  std::uint32_t target = 0;  // absolute 1-based line for jnz/jmp
  std::string reg;           // tested register (jnz) or destination (add)
  std::uint32_t imm = 0;     // addend for add
};

struct ClassicalProgram {
  std::uint32_t word_size = 0;
  std::vector<ClassicalInstruction> instructions;  // index 0 = line 1
  std::map<std::string, std::uint32_t> labels;
  std::vector<std::string> register_names;

  std::uint32_t length() const { return static_cast<std::uint32_t>(instructions.size()); }
};

// Same line-oriented grammar as the main assembler restricted to
// {jnz label reg, jmp label, add reg $imm, nop}; labels resolve to absolute
// line numbers.
ClassicalProgram parse_classical(const std::string& text, std::uint32_t word_size);

// How the classical machine is lifted to superposition:
//   Naive       — each term steps classically; nothing distinguishes merged
//                 paths, so amplitudes of colliding successors sum (and the
//                 norm can shrink).  A diagnostic, not a physical machine.
//   History     — every step prepends the old pc to a per-term history list,
//                 making the step map injective.
//   HistoryCopy — History plus a snapshot of the initial register values
//                 (held in "<name>_in" registers); after the run the history
//                 and pc are erased by recomputing them from the snapshot.
enum class EmbeddingMode { Naive, History, HistoryCopy };

struct LiftedRun {
  QuantumState state;
  std::vector<double> step_norms;  // squared norm after each step
  std::uint64_t steps = 0;
  std::vector<std::string> warnings;
};

// One classical step applied to one basis term: execute the instruction at
// pc (identity when pc is out of range), then update pc.  History modes
// prepend the old pc.  register_names of the owning state decide the layout
// of label.regs (data registers first, then any snapshot copies).
std::vector<std::pair<BasisLabel, Amplitude>> classical_step(const ClassicalProgram& program,
                                                             EmbeddingMode mode,
                                                             const BasisLabel& label,
                                                             const Amplitude& amp);

// Lifts the classical machine over a superposed input and runs it.  Input
// terms assign the program's data registers, plus optionally a pc (default
// 1); history and snapshot fields are created by this function.  In Naive
// mode the norm may shrink — it is reported per step, never "fixed".  In
// HistoryCopy mode the run ends by erasing pc and history, leaving data
// registers plus the "<name>_in" snapshot registers.
LiftedRun run_lifted(const ClassicalProgram& program, EmbeddingMode mode,
                     const QuantumState& input, std::uint64_t steps);

// The coined-walk program run under a history-augmented cycle: every fetch
// prepends the old pc, so no two computation paths can interfere.  Runs to
// completion (all terms at a common pc past the program, br = 1) and returns
// the final state; measuring x reproduces the classical walk distribution.
QuantumState walk_with_history(std::uint32_t iterations, std::uint32_t x0,
                               std::uint32_t word_size);

// The program listing walk_with_history executes, byte-identical to the
// shipped corpus file.
extern const char* const kWalkProgramText;

}  // namespace qcm
