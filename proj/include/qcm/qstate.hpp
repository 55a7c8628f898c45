#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcm/basis.hpp"
#include "qcm/types.hpp"

#include "json.hpp"

namespace qcm {

enum class Gate { H, Not, Y, Z };

std::string gate_name(Gate g);
std::optional<Gate> gate_from_name(const std::string& name);

// Applies a single-bit gate to bit `bit` of `value` and returns the resulting
// (value, amplitude-factor) pairs. `adjoint` applies the conjugate transpose
// (every supported gate is Hermitian, so this is the same matrix; it is kept
// explicit so reverse instructions use the inverse by construction).
std::vector<std::pair<std::uint32_t, Amplitude>> apply_single_bit_gate(std::uint32_t value,
                                                                       std::uint32_t bit, Gate gate,
                                                                       bool adjoint = false);

// Sparse register-level quantum state: a map from basis labels to complex
// amplitudes. States are value types; every operation returns a new state and
// prunes amplitudes below kPruneThreshold.
class QuantumState {
 public:
  QuantumState() = default;
  QuantumState(std::uint32_t word_size, std::vector<std::string> register_names)
      : word_size_(word_size), register_names_(std::move(register_names)) {}

  std::uint32_t word_size() const { return word_size_; }
  const std::vector<std::string>& register_names() const { return register_names_; }
  const std::map<BasisLabel, Amplitude>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Index of a named register; throws UnknownRegister.
  std::size_t register_index(const std::string& name) const;

  // Adds `amp` to the coefficient of `label` (merging is how interference happens).
  void accumulate(const BasisLabel& label, Amplitude amp);
  // Drops terms with |amp| < kPruneThreshold.
  void prune();

  void set_register_names(std::vector<std::string> names) { register_names_ = std::move(names); }

 private:
  std::uint32_t word_size_ = 0;
  std::vector<std::string> register_names_;
  std::map<BasisLabel, Amplitude> terms_;
};

// Sum of squared amplitude moduli.
double norm(const QuantumState& state);

// Applies a gate to bit `bit_index` of the named register in every term.
// Throws BitOutOfRange if bit_index >= word size, UnknownRegister otherwise.
QuantumState apply_gate(const QuantumState& state, const std::string& register_name,
                        std::uint32_t bit_index, Gate gate, bool adjoint = false);

// Probability distribution over the observed registers' value tuples.
// Throws UnnormalizedState when |norm - 1| > kNormTolerance.
std::map<std::vector<std::uint32_t>, double> measure_distribution(
    const QuantumState& state, const std::vector<std::string>& observed);

// Draws `count` samples from measure_distribution; deterministic for a fixed seed.
std::vector<std::vector<std::uint32_t>> sample(const QuantumState& state,
                                               const std::vector<std::string>& observed,
                                               std::size_t count, std::uint64_t seed);

// Which label fields form the "control" part for a separability question.
struct ControlFields {
  bool pc = false;
  bool br = false;
  bool in = false;
  bool history = false;
  std::vector<std::string> registers;  // named data registers treated as control
};

// A basis label projected onto either the control or the data side of a split.
struct Projection {
  std::optional<std::uint32_t> pc;
  std::optional<std::int64_t> br;
  std::optional<std::string> in;
  std::optional<std::vector<std::uint32_t>> history;
  std::vector<std::pair<std::string, std::uint32_t>> registers;

  auto operator<=>(const Projection&) const = default;
};

struct SeparabilityReport {
  bool separable = false;
  // Populated when separable: the single control value carrying all weight.
  Projection control;
  // Populated when entangled: two control values and their normalized
  // conditional data vectors.
  Projection control_a, control_b;
  std::map<Projection, Amplitude> conditional_a, conditional_b;
  // True when the conditional vectors are proportional (product state with a
  // superposed control); false means genuine entanglement.
  bool proportional = false;
};

// Groups terms by the selected control fields. Separable iff exactly one
// control value has nonzero weight.
SeparabilityReport separability_verdict(const QuantumState& state, const ControlFields& fields);

// True iff a = lambda * b for a unit-modulus lambda, within tol per amplitude.
// lambda is fixed from the largest-modulus term of a. Throws ZeroState when
// either state has norm below tol.
bool equal_up_to_global_phase(const QuantumState& a, const QuantumState& b,
                              double tol = kNormTolerance);

// JSON serialization:
//   {"word_size": k,
//    "terms": [{"amp": [re, im], "pc": int|null, "br": int|null, "in": string|null,
//               "regs": {"name": value}, "history": [int]|null}]}
// Terms are emitted sorted by register tuple.
nlohmann::ordered_json state_to_json(const QuantumState& state);
QuantumState state_from_json(const nlohmann::json& j);

}  // namespace qcm
