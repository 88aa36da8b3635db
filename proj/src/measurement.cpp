#include "qzlab/measurement.hpp"

#include "qzlab/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace qzlab {

const char* to_string(Outcome o) noexcept { return o == Outcome::Yes ? "yes" : "no"; }

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t id) {
    const std::array<std::uint32_t, 4> words{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

} // namespace

UniformStream::UniformStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : engine_(seeded_engine(master_seed, stream_id)) {}

double UniformStream::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

UniformStream rng_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return UniformStream(master_seed, stream_id);
}

double born_probability(const StateVector& s, const StateVector& target) {
    if (!(s.spec() == target.spec())) {
        throw DimensionMismatch("born_probability: state and target live in different spaces");
    }
    require_unit_norm(s, "born_probability");
    require_unit_norm(target, "born_probability");
    if (s == target) {
        return 1.0;
    }
    return std::clamp(std::norm(kernels::dot_conj(target.amps(), s.amps())), 0.0, 1.0);
}

MeasurementResult binary_measure(const StateVector& s, const StateVector& target,
                                 const DecisionPolicy& policy) {
    const double p = born_probability(s, target);

    Outcome outcome = Outcome::Yes;
    switch (policy.mode()) {
    case DecisionPolicy::Mode::ForceYes:
        break;
    case DecisionPolicy::Mode::ForceNo:
        outcome = Outcome::No;
        break;
    case DecisionPolicy::Mode::Sample:
        if (policy.stream() == nullptr) {
            throw ValidationError("binary_measure: sampling policy has no stream attached");
        }
        outcome = policy.stream()->next() < p ? Outcome::Yes : Outcome::No;
        break;
    }

    if (outcome == Outcome::Yes) {
        if (p < tol::kZeroNorm) {
            throw DegenerateBranch(fmt::format("binary_measure: YES branch has probability {:.3e}", p));
        }
        return {Outcome::Yes, p, target};
    }

    // (1 - |t><t|) s
    std::vector<cplx> residual(s.amps().begin(), s.amps().end());
    const cplx overlap = kernels::dot_conj(target.amps(), s.amps());
    kernels::axpy(residual, -overlap, target.amps());
    const double p_no = kernels::norm2(residual);
    if (s == target || p_no < tol::kZeroNorm) {
        throw DegenerateBranch(fmt::format("binary_measure: NO branch has probability {:.3e}", p_no));
    }
    kernels::scale(residual, 1.0 / std::sqrt(p_no));
    return {Outcome::No, p, StateVector(s.spec(), std::move(residual))};
}

} // namespace qzlab
