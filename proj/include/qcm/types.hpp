#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcm {

using Amplitude = std::complex<double>;

// Amplitudes with |a| below this are dropped after every state-transforming step.
inline constexpr double kPruneThreshold = 1e-12;
// Legal machine states must keep |norm - 1| within this bound; it is also the
// default tolerance for amplitude and distribution comparisons.
inline constexpr double kNormTolerance = 1e-9;
// Reference constructions (oracle matrices) must be unitary to this tighter bound.
inline constexpr double kOracleTolerance = 1e-12;
// Input files whose norm is further than this from 1 trigger a warning before renormalization.
inline constexpr double kInputNormWarning = 1e-6;
// Enumerated analysis domains larger than this are rejected.
inline constexpr std::size_t kDomainCap = 4096;
// Upper bound accepted for sync-time scans.
inline constexpr std::uint32_t kScanLimit = 10000;

// Word sizes are k bits, 2 <= k <= 16; register/pc/br values live in [0, 2^k).
inline constexpr std::uint32_t kMinWordSize = 2;
inline constexpr std::uint32_t kMaxWordSize = 16;

inline std::uint32_t word_count(std::uint32_t word_size) {
  return 1u << word_size;
}

inline std::uint32_t word_mask(std::uint32_t word_size) {
  return word_count(word_size) - 1;
}

// Two's-complement reading of a k-bit word.
inline std::int64_t to_signed(std::uint32_t value, std::uint32_t word_size) {
  const std::uint32_t half = 1u << (word_size - 1);
  return value >= half ? static_cast<std::int64_t>(value) - word_count(word_size)
                       : static_cast<std::int64_t>(value);
}

// Reduce an arbitrary signed value into a k-bit word.
inline std::uint32_t to_word(std::int64_t value, std::uint32_t word_size) {
  const std::int64_t m = word_count(word_size);
  std::int64_t r = value % m;
  if (r < 0) r += m;
  return static_cast<std::uint32_t>(r);
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- state-level errors ----
struct BitOutOfRange : Error {
  using Error::Error;
};
struct UnnormalizedState : Error {
  using Error::Error;
};
struct ZeroState : Error {
  using Error::Error;
};
struct UnknownRegister : Error {
  using Error::Error;
};

// ---- assembler errors ----
struct ParseError : Error {
  int line;  // 1-based source line, 0 when not tied to a line
  ParseError(int line_number, const std::string& reason)
      : Error("parse error at line " + std::to_string(line_number) + ": " + reason),
        line(line_number) {}
  explicit ParseError(const std::string& reason) : Error("parse error: " + reason), line(0) {}
};
struct OffsetOverflow : ParseError {
  using ParseError::ParseError;
};

// ---- machine errors ----
struct DomainViolation : Error {
  using Error::Error;
};
struct InputNotZeroed : Error {
  using Error::Error;
};
struct UnnormalizedInput : Error {
  using Error::Error;
};
struct TraceUnavailable : Error {
  using Error::Error;
};

// ---- analysis errors ----
struct NotCertified : Error {
  using Error::Error;
};
struct NonSquare : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct DomainTooLarge : Error {
  using Error::Error;
};
struct InvalidDomain : Error {
  using Error::Error;
};

// ---- oracle errors ----
struct Wraparound : Error {
  using Error::Error;
};

}  // namespace qcm
