#pragma once

#include "qzlab/fock.hpp"

#include <cstdint>
#include <random>

namespace qzlab {

enum class Outcome { Yes, No };

const char* to_string(Outcome o) noexcept;

/// Deterministic uniform stream on [0, 1).
///
/// Stream (seed, id) is std::mt19937_64 seeded through
/// std::seed_seq{seed_lo, seed_hi, id_lo, id_hi} (32-bit words), and each
/// draw is (engine() >> 11) * 2^-53. Both the engine and seed_seq are fully
/// specified by the C++ standard, so sequences are identical across
/// platforms and standard libraries.
class UniformStream {
public:
    UniformStream(std::uint64_t master_seed, std::uint64_t stream_id);

    double next();

private:
    std::mt19937_64 engine_;
};

UniformStream rng_stream(std::uint64_t master_seed, std::uint64_t stream_id);

/// How binary_measure picks a branch. Sample holds a non-owning pointer to
/// the stream of the trajectory that owns it.
class DecisionPolicy {
public:
    enum class Mode { Sample, ForceYes, ForceNo };

    static DecisionPolicy sample(UniformStream& stream) { return DecisionPolicy(Mode::Sample, &stream); }
    static DecisionPolicy force_yes() { return DecisionPolicy(Mode::ForceYes, nullptr); }
    static DecisionPolicy force_no() { return DecisionPolicy(Mode::ForceNo, nullptr); }
    /// Sample mode with no stream attached yet; ensembles attach one per trajectory.
    static DecisionPolicy sample_unbound() { return DecisionPolicy(Mode::Sample, nullptr); }

    Mode mode() const noexcept { return mode_; }
    UniformStream* stream() const noexcept { return stream_; }

private:
    DecisionPolicy(Mode mode, UniformStream* stream) : mode_(mode), stream_(stream) {}

    Mode mode_;
    UniformStream* stream_;
};

struct MeasurementResult {
    Outcome outcome;
    double probability_yes;
    StateVector post_state;
};

/// |<target|s>|^2 clamped to [0, 1]. Bitwise-identical states give exactly 1.
double born_probability(const StateVector& s, const StateVector& target);

/// Yes/no measurement of {P, 1 - P} with P = |target><target|.
///
/// YES collapses onto `target` verbatim (its phase included); NO collapses
/// onto the renormalized (1 - P)|s>. Throws DegenerateBranch when the chosen
/// branch has probability below 1e-14.
MeasurementResult binary_measure(const StateVector& s, const StateVector& target,
                                 const DecisionPolicy& policy);

} // namespace qzlab
