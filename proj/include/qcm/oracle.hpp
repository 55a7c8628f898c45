#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcm/types.hpp"

namespace qcm {

// A reference linear map over named data registers, stored column by column:
// inputs[i] is the i-th defined input tuple (values in register_names order)
// and columns[i] maps output tuples to amplitudes.  Inputs outside `inputs`
// are undefined cells, deliberately left unrepresented rather than fabricated.
struct OracleMatrix {
  std::vector<std::string> register_names;
  std::vector<std::vector<std::uint32_t>> inputs;
  std::vector<std::map<std::vector<std::uint32_t>, Amplitude>> columns;
};

// Largest |G - I| entry of the Gram matrix G = A†A of the given columns.
// 0 for an exactly orthonormal column set (an isometry on its domain).
double column_orthonormality_deviation(
    const std::vector<std::map<std::vector<std::uint32_t>, Amplitude>>& columns);

// The conditional increment on registers (x, y): for x = 0, y advances
// cyclically through all 2^k values; for x != 0, x advances cyclically
// through the nonzero values (2^k - 1 wraps to 1, never to 0).  The wrap
// rules complete the out-of-range cells to a fixed permutation so the whole
// table is a bijection.  Defined for any word size k >= 1.
OracleMatrix conditional_increment(std::uint32_t word_size);

// Exponentiation by direct arithmetic on registers (x, y, res, r1): every
// input with res = 0, r1 = 0, y <= max_iterations and x^y < 2^k maps to
// (x, y, x^y, 0).  Other cells are undefined.
OracleMatrix exponentiation_map(std::uint32_t word_size, std::uint32_t max_iterations);

// The 2^k x 2^k unitary acting on register x as Y on bit i and Z on every
// bit below i, assembled by direct tensor products.  Throws BitOutOfRange
// when i >= k.
OracleMatrix majorana_unitary(std::uint32_t word_size, std::uint32_t bit_index);

// Direct state-vector simulation of a coined walk on the line [0, 2^k):
// each round applies H to the coin, then moves x up (coin 1) or down
// (coin 0).  Amplitudes are keyed by (x, coin).
struct WalkReference {
  // State right after the r-th coin toss (index r-1), before the move.
  std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, Amplitude>> after_coin;
  // Index 0 is the initial state; index r the state after r full rounds.
  std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, Amplitude>> after_shift;
  // Marginal distribution of x in the final state.
  std::map<std::uint32_t, double> distribution;
};

// Throws Wraparound unless x0 - iterations >= 0 and x0 + iterations < 2^k.
WalkReference hadamard_walk_reference(std::uint32_t iterations, std::uint32_t x0,
                                      std::uint32_t word_size);

// Exact binomial distribution of an unbiased +-1 walk after the given number
// of rounds, over unbounded integer positions.
std::map<std::int64_t, double> classical_walk_reference(std::uint32_t iterations,
                                                        std::int64_t x0);

}  // namespace qcm
