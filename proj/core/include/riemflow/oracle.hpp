#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "riemflow/pauli.hpp"
#include "riemflow/state.hpp"

namespace riemflow {

/// Exact-diagonalization ground truth for a Hamiltonian.
struct GroundTruth {
  Eigen::VectorXd eigenvalues;    // ascending
  double ground_energy;           // eigenvalues(0)
  int degeneracy;                 // eigenvalues within 1e-9 of the ground
  Eigen::MatrixXcd ground_basis;  // orthonormal columns spanning the ground space
  double spectral_norm;           // max |eigenvalue|
};

GroundTruth ground_truth(const PauliSum& hamiltonian);

/// energy - E0; nonnegative (up to rounding) for simulator-produced energies.
double residual(double energy, const GroundTruth& gt);

/// Sum over the ground basis of |<g|psi>|^2, in [0, 1].
double ground_space_fidelity(const StateVector& state, const GroundTruth& gt);

struct SpectrumEntry {
  PauliWord word;
  double magnitude;  // |c_j| of the Riemannian gradient component
};

/// Magnitudes of all 4^N - 1 Riemannian-gradient components at `state`,
/// grouped by Pauli weight.
std::map<int, std::vector<SpectrumEntry>> gradient_spectrum(
    const StateVector& state, const PauliSum& hamiltonian);

}  // namespace riemflow
