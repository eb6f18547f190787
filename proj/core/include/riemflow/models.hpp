#pragma once

#include "riemflow/pauli.hpp"

namespace riemflow {

/// Transverse-field Ising chain H = -sum_i (Z_i Z_{i+1} + g X_i), with an
/// optional wrap-around bond for periodic boundaries.
PauliSum tfim_hamiltonian(int n_qubits, double g, bool periodic);

}  // namespace riemflow
