#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcm {

// One computational-basis configuration. Data-register values are stored in a
// fixed order defined by the owning QuantumState's register_names; control
// fields are absent (nullopt) for pure data states. `regs` is ordered first so
// the default lexicographic ordering sorts terms by register tuple, which is
// the canonical serialization order.
struct BasisLabel {
  std::vector<std::uint32_t> regs;
  std::optional<std::uint32_t> pc;
  std::optional<std::int64_t> br;  // two's-complement reading of the k-bit branch register
  std::optional<std::string> in;   // canonical instruction text; nullopt = empty
  std::optional<std::vector<std::uint32_t>> history;  // pc history, newest first

  auto operator<=>(const BasisLabel&) const = default;
};

}  // namespace qcm
