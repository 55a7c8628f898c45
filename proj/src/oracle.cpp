#include "qcm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace qcm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void prune_map(std::map<std::pair<std::uint32_t, std::uint32_t>, Amplitude>& amps) {
  for (auto it = amps.begin(); it != amps.end();) {
    it = std::abs(it->second) < kPruneThreshold ? amps.erase(it) : std::next(it);
  }
}

// x^y stopping early once the value can no longer fit any word.
std::optional<std::uint64_t> checked_pow(std::uint32_t x, std::uint32_t y, std::uint64_t limit) {
  std::uint64_t value = 1;
  for (std::uint32_t i = 0; i < y; ++i) {
    value *= x;
    if (value >= limit) return std::nullopt;
    if (value == 0) break;  // 0^y stays 0 for every later factor
  }
  return value;
}

}  // namespace

double column_orthonormality_deviation(
    const std::vector<std::map<std::vector<std::uint32_t>, Amplitude>>& columns) {
  // Sparse Gram computation: only column pairs sharing an output label can
  // produce a nonzero off-diagonal entry.
  std::map<std::vector<std::uint32_t>, std::vector<std::pair<std::size_t, Amplitude>>> rows;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& [label, amp] : columns[c]) {
      rows[label].emplace_back(c, amp);
    }
  }
  std::vector<double> diagonal(columns.size(), 0.0);
  std::map<std::pair<std::size_t, std::size_t>, Amplitude> off_diagonal;
  for (const auto& [label, entries] : rows) {
    for (std::size_t a = 0; a < entries.size(); ++a) {
      diagonal[entries[a].first] += std::norm(entries[a].second);
      for (std::size_t b = a + 1; b < entries.size(); ++b) {
        off_diagonal[{entries[a].first, entries[b].first}] +=
            std::conj(entries[a].second) * entries[b].second;
      }
    }
  }
  double deviation = 0.0;
  for (const double d : diagonal) deviation = std::max(deviation, std::abs(d - 1.0));
  for (const auto& [pair, g] : off_diagonal) deviation = std::max(deviation, std::abs(g));
  return deviation;
}

OracleMatrix conditional_increment(std::uint32_t word_size) {
  if (word_size < 1 || word_size > kMaxWordSize) {
    throw InvalidDomain("conditional increment needs a word size between 1 and " +
                        std::to_string(kMaxWordSize));
  }
  const std::uint32_t count = word_count(word_size);
  OracleMatrix oracle;
  oracle.register_names = {"x", "y"};
  for (std::uint32_t x = 0; x < count; ++x) {
    for (std::uint32_t y = 0; y < count; ++y) {
      std::uint32_t x_out = x;
      std::uint32_t y_out = y;
      if (x == 0) {
        y_out = (y + 1) % count;
      } else {
        x_out = x == count - 1 ? 1 : x + 1;
      }
      oracle.inputs.push_back({x, y});
      oracle.columns.push_back({{{x_out, y_out}, 1.0}});
    }
  }
  return oracle;
}

OracleMatrix exponentiation_map(std::uint32_t word_size, std::uint32_t max_iterations) {
  if (word_size < 1 || word_size > kMaxWordSize) {
    throw InvalidDomain("exponentiation map needs a word size between 1 and " +
                        std::to_string(kMaxWordSize));
  }
  const std::uint32_t count = word_count(word_size);
  if (max_iterations >= count) {
    throw InvalidDomain("iteration bound " + std::to_string(max_iterations) +
                        " does not fit word size " + std::to_string(word_size));
  }
  OracleMatrix oracle;
  oracle.register_names = {"x", "y", "res", "r1"};
  for (std::uint32_t x = 0; x < count; ++x) {
    for (std::uint32_t y = 0; y <= max_iterations; ++y) {
      const auto power = checked_pow(x, y, count);
      if (!power) continue;  // overflow: undefined cell
      oracle.inputs.push_back({x, y, 0, 0});
      oracle.columns.push_back({{{x, y, static_cast<std::uint32_t>(*power), 0}, 1.0}});
    }
  }
  return oracle;
}

OracleMatrix majorana_unitary(std::uint32_t word_size, std::uint32_t bit_index) {
  if (word_size < 1 || word_size > kMaxWordSize) {
    throw InvalidDomain("operator construction needs a word size between 1 and " +
                        std::to_string(kMaxWordSize));
  }
  if (bit_index >= word_size) {
    throw BitOutOfRange("bit index " + std::to_string(bit_index) +
                        " out of range for word size " + std::to_string(word_size));
  }
  using Matrix = Eigen::MatrixXcd;
  const std::complex<double> i_unit(0.0, 1.0);
  Matrix y(2, 2), z(2, 2), identity(2, 2);
  y << 0.0, -i_unit, i_unit, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  identity << 1.0, 0.0, 0.0, 1.0;

  // Basis index x = sum of bit_j * 2^j, so the first tensor factor is the
  // highest bit.  Bit `bit_index` carries Y; every lower bit carries Z.
  Matrix op = Matrix::Identity(1, 1);
  for (std::uint32_t bit = word_size; bit-- > 0;) {
    const Matrix& factor = bit == bit_index ? y : (bit < bit_index ? z : identity);
    op = Eigen::kroneckerProduct(op, factor).eval();
  }

  const std::uint32_t count = word_count(word_size);
  OracleMatrix oracle;
  oracle.register_names = {"x"};
  for (std::uint32_t x = 0; x < count; ++x) {
    oracle.inputs.push_back({x});
    std::map<std::vector<std::uint32_t>, Amplitude> column;
    for (std::uint32_t row = 0; row < count; ++row) {
      const Amplitude amp = op(row, x);
      if (std::abs(amp) >= kPruneThreshold) column[{row}] = amp;
    }
    oracle.columns.push_back(std::move(column));
  }
  return oracle;
}

WalkReference hadamard_walk_reference(std::uint32_t iterations, std::uint32_t x0,
                                      std::uint32_t word_size) {
  const std::uint32_t count = word_count(word_size);
  if (x0 >= count || x0 < iterations || x0 + iterations >= count) {
    throw Wraparound("a walk of " + std::to_string(iterations) + " rounds from x = " +
                     std::to_string(x0) + " leaves [0, " + std::to_string(count) + ")");
  }
  WalkReference ref;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Amplitude> state{{{x0, 0}, 1.0}};
  ref.after_shift.push_back(state);
  for (std::uint32_t round = 0; round < iterations; ++round) {
    // Coin: H maps coin value c to (|0> + (-1)^c |1>)/sqrt(2).
    std::map<std::pair<std::uint32_t, std::uint32_t>, Amplitude> tossed;
    for (const auto& [key, amp] : state) {
      const auto& [x, coin] = key;
      tossed[{x, 0}] += amp * kInvSqrt2;
      tossed[{x, 1}] += (coin ? -amp : amp) * kInvSqrt2;
    }
    prune_map(tossed);
    ref.after_coin.push_back(tossed);
    // Move: coin 1 steps up, coin 0 steps down.
    std::map<std::pair<std::uint32_t, std::uint32_t>, Amplitude> moved;
    for (const auto& [key, amp] : tossed) {
      const auto& [x, coin] = key;
      moved[{coin ? x + 1 : x - 1, coin}] += amp;
    }
    prune_map(moved);
    ref.after_shift.push_back(moved);
    state = std::move(moved);
  }
  for (const auto& [key, amp] : state) {
    ref.distribution[key.first] += std::norm(amp);
  }
  return ref;
}

std::map<std::int64_t, double> classical_walk_reference(std::uint32_t iterations,
                                                        std::int64_t x0) {
  if (iterations > 20) {
    throw InvalidDomain("classical walk reference supports at most 20 rounds");
  }
  // Position after i rounds with j up-moves is x0 + 2j - i, with C(i, j)
  // equally likely paths out of 2^i.
  std::map<std::int64_t, double> distribution;
  std::uint64_t binomial = 1;  // C(i, 0)
  const double total = std::pow(2.0, static_cast<double>(iterations));
  for (std::uint32_t j = 0; j <= iterations; ++j) {
    distribution[x0 + 2 * static_cast<std::int64_t>(j) - iterations] +=
        static_cast<double>(binomial) / total;
    if (j < iterations) binomial = binomial * (iterations - j) / (j + 1);
  }
  return distribution;
}

}  // namespace qcm
