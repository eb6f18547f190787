#pragma once

#include <bit>
#include <complex>
#include <cstdint>

#include "riemflow/pauli.hpp"

namespace riemflow::detail {

// Wire w of an N-qubit word maps to bit (N-1-w) of a basis-state index,
// matching the qubit-0-leftmost tensor convention.
struct IndexMasks {
  std::int64_t x = 0;
  std::int64_t z = 0;
  int y_count = 0;  // number of Y factors, fixes the i^y prefactor
};

inline IndexMasks to_index_masks(const PauliWord& word) {
  const int n = word.n_qubits();
  IndexMasks masks;
  for (int w = 0; w < n; ++w) {
    const std::int64_t bit = std::int64_t{1} << (n - 1 - w);
    if ((word.x_mask() >> w) & 1) masks.x |= bit;
    if ((word.z_mask() >> w) & 1) masks.z |= bit;
  }
  masks.y_count = std::popcount(word.x_mask() & word.z_mask());
  return masks;
}

// Phase mu such that W |index> = mu |index ^ masks.x>.
inline std::complex<double> word_phase(const IndexMasks& masks,
                                       std::int64_t index) {
  const int z_parity = std::popcount(static_cast<std::uint64_t>(masks.z & index)) & 1;
  int exponent = (masks.y_count + 2 * z_parity) & 3;
  switch (exponent) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace riemflow::detail
