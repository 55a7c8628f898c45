#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcm/isa.hpp"
#include "qcm/qstate.hpp"
#include "qcm/types.hpp"

namespace qcm {

// What the machine records while it runs.
enum class TraceMode {
  Off,         // keep only the live state
  EveryCycle,  // snapshot after every fetch
  Br1Only,     // snapshot only cycles where every term has br = 1
};

struct MachineConfig {
  TraceMode trace = TraceMode::Off;
  // When set, fetch prepends the pre-fetch pc to a per-term history list.
  bool record_pc_history = false;
};

// One recorded point in a run: the machine state immediately after fetch
// (cycle 0 records the initial state instead, before any fetch happened).
struct Snapshot {
  std::uint64_t cycle = 0;
  QuantumState state;
};

struct MachineRun {
  Program program;
  MachineConfig config;
  QuantumState state;
  std::uint64_t cycle = 0;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
};

// Raised when an instruction is applied outside its defined domain.  Carries
// enough context to point at the offending cycle, line and basis term.
struct ExecutionFault : DomainViolation {
  ExecutionFault(std::uint64_t cycle, std::uint32_t line, const std::string& instruction,
                 const std::string& term, const std::string& reason);
  std::uint64_t cycle;
  std::uint32_t line;
  std::string instruction_text;
  std::string term_text;
  std::string reason;
};

// Builds the initial machine state: pc = 0, br = 1, no instruction latched,
// data registers as given.  `input` maps labels over the data registers only
// (pc/br/in must be absent) to amplitudes; it is normalized on entry and a
// warning is recorded when the correction exceeds the reporting threshold.
// Registers named by the program's .in list must be zero in every term.
MachineRun init_run(const Program& program, const QuantumState& input,
                    const MachineConfig& config = {});

// Convenience: a single classical basis input given as register values.
// Registers not mentioned start at zero.
MachineRun init_run(const Program& program, const std::map<std::string, std::uint32_t>& values,
                    const MachineConfig& config = {});

// Applies one instruction to the data registers and branch offset of a basis
// term, returning the superposition of successor terms.  The label's pc/in
// fields are left untouched; callers own the fetch/retire bookkeeping.
std::vector<std::pair<BasisLabel, Amplitude>> execute_semantics(const Program& program,
                                                                const Instruction& instr,
                                                                const BasisLabel& label,
                                                                const Amplitude& amp);

// The three stages of one cycle as pure state maps.  Every term must carry pc
// and br.  apply_fetch advances pc by br and latches the addressed
// instruction (optionally prepending the old pc to the term's history);
// apply_execute runs each latched instruction; apply_retire clears the latch.
// apply_execute reports faults as ExecutionFault with cycle 0 — callers that
// track time re-throw with the cycle filled in.
QuantumState apply_fetch(const Program& program, const QuantumState& state,
                         bool record_pc_history = false, bool* saw_zero_branch = nullptr);
QuantumState apply_execute(const Program& program, const QuantumState& state);
QuantumState apply_retire(const QuantumState& state);

// Fetch, execute and retire applied once, with no run bookkeeping.  Used both
// by step_cycle and by whole-cycle-operator checks over enumerated bases.
QuantumState advance_one_cycle(const Program& program, const QuantumState& state,
                               bool record_pc_history = false);

// Advances the run by one cycle: fetch (pc advances by br, the addressed
// instruction is latched), execute (latched instruction acts on data and br),
// retire (the latch is cleared).  Records a snapshot per the trace mode.
void step_cycle(MachineRun& run);

// Runs `cycles` additional cycles.
void run_machine(MachineRun& run, std::uint64_t cycles);

// The recorded trace: the cycle-0 snapshot plus one post-fetch snapshot per
// executed cycle (filtered by the trace mode).  Throws TraceUnavailable when
// the run was configured with TraceMode::Off.
const std::vector<Snapshot>& trace(const MachineRun& run);

}  // namespace qcm
