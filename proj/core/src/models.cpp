#include "riemflow/models.hpp"

namespace riemflow {

PauliSum tfim_hamiltonian(int n_qubits, double g, bool periodic) {
  if (n_qubits < 2) {
    throw std::invalid_argument("tfim_hamiltonian: needs at least 2 qubits");
  }
  PauliSum h(n_qubits);
  auto zz = [&](int a, int b) {
    const PauliWord za = PauliWord::single(n_qubits, a, PauliLetter::Z);
    const PauliWord zb = PauliWord::single(n_qubits, b, PauliLetter::Z);
    return PauliWord(n_qubits, 0, za.z_mask() | zb.z_mask());
  };
  for (int i = 0; i + 1 < n_qubits; ++i) {
    h.add(-1.0, zz(i, i + 1));
  }
  if (periodic && n_qubits > 2) {
    h.add(-1.0, zz(0, n_qubits - 1));
  }
  for (int i = 0; i < n_qubits; ++i) {
    h.add(-g, PauliWord::single(n_qubits, i, PauliLetter::X));
  }
  return h;
}

}  // namespace riemflow
