#pragma once

#include "qzlab/fock.hpp"

#include <vector>

// Closed-form unitary evolution, hbar = 1. No matrix exponentials: diagonal
// phases, the 2x2 Rabi rotation, and a basis permutation cover every
// protocol.
namespace qzlab {

struct DiagonalHamiltonian {
    std::vector<double> eigenvalues;

    /// E_n = omega * n for n < dim.
    static DiagonalHamiltonian harmonic(double omega, std::size_t dim);
};

/// H = (Omega / 2) sigma_x on a two-level factor.
struct RabiHamiltonian {
    double rabi_frequency;
};

/// amps[n] *= exp(-i E_n t)
StateVector evolve_diagonal(const StateVector& s, const DiagonalHamiltonian& h, double t);

/// Rotation by Omega t / 2 about x; <0|U|0> = cos(Omega t / 2).
StateVector evolve_rabi(const StateVector& s, const RabiHamiltonian& h, double t);

/// The pointer-coupling permutation |i>|j> -> |i>|(j + i) mod D> on a
/// system ⊗ apparatus state whose last factor is the apparatus (dimension D).
StateVector apply_premeasurement(const StateVector& joint);

/// sum_i c_i |i> -> sum_i c_i |i> ⊗ |i>, starting the apparatus in its reset
/// state |0>. Throws ApparatusTooSmall when apparatus_dim < system dimension.
StateVector premeasurement_unitary(const StateVector& system, std::size_t apparatus_dim);

} // namespace qzlab
