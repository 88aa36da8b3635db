#include "qzlab/dynamics.hpp"

#include "qzlab/kernels.hpp"

#include <fmt/format.h>

#include <cmath>

namespace qzlab {

DiagonalHamiltonian DiagonalHamiltonian::harmonic(double omega, std::size_t dim) {
    DiagonalHamiltonian h;
    h.eigenvalues.resize(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        h.eigenvalues[n] = omega * static_cast<double>(n);
    }
    return h;
}

StateVector evolve_diagonal(const StateVector& s, const DiagonalHamiltonian& h, double t) {
    if (h.eigenvalues.size() != s.dim()) {
        throw DimensionMismatch(fmt::format("evolve_diagonal: {} eigenvalues for a state of dimension {}",
                                            h.eigenvalues.size(), s.dim()));
    }
    require_unit_norm(s, "evolve_diagonal");
    std::vector<cplx> phases(s.dim());
    for (std::size_t n = 0; n < s.dim(); ++n) {
        const double e = h.eigenvalues[n];
        if (!std::isfinite(e)) {
            throw ValidationError("evolve_diagonal: eigenvalue is not finite");
        }
        phases[n] = std::polar(1.0, -e * t);
    }
    std::vector<cplx> amps(s.amps().begin(), s.amps().end());
    kernels::mul(amps, phases);
    return StateVector(s.spec(), std::move(amps));
}

StateVector evolve_rabi(const StateVector& s, const RabiHamiltonian& h, double t) {
    if (s.dim() != 2) {
        throw DimensionMismatch(fmt::format("evolve_rabi: needs a two-level state, got dimension {}", s.dim()));
    }
    if (!(h.rabi_frequency > 0.0) || !std::isfinite(h.rabi_frequency)) {
        throw ValidationError("evolve_rabi: rabi_frequency must be finite and > 0");
    }
    require_unit_norm(s, "evolve_rabi");
    const double half_angle = 0.5 * h.rabi_frequency * t;
    const double c = std::cos(half_angle);
    const cplx mis{0.0, -std::sin(half_angle)};
    return StateVector(s.spec(), {c * s[0] + mis * s[1], mis * s[0] + c * s[1]});
}

StateVector apply_premeasurement(const StateVector& joint) {
    const auto& dims = joint.spec().factor_dims();
    if (dims.size() < 2) {
        throw InvalidFactor("apply_premeasurement: need a system factor and an apparatus factor");
    }
    const std::size_t apparatus = dims.back();
    const std::size_t system = joint.dim() / apparatus;
    if (apparatus < system) {
        throw ApparatusTooSmall(fmt::format(
            "apply_premeasurement: apparatus dimension {} < system dimension {}", apparatus, system));
    }
    std::vector<cplx> amps(joint.dim());
    for (std::size_t i = 0; i < system; ++i) {
        for (std::size_t j = 0; j < apparatus; ++j) {
            amps[i * apparatus + (j + i) % apparatus] = joint[i * apparatus + j];
        }
    }
    return StateVector(joint.spec(), std::move(amps));
}

StateVector premeasurement_unitary(const StateVector& system, std::size_t apparatus_dim) {
    if (apparatus_dim < system.dim()) {
        throw ApparatusTooSmall(fmt::format(
            "premeasurement_unitary: apparatus dimension {} < system dimension {}", apparatus_dim,
            system.dim()));
    }
    const StateVector ready = StateVector::basis(HilbertSpec::single(apparatus_dim), 0);
    return apply_premeasurement(tensor(system, ready));
}

} // namespace qzlab
