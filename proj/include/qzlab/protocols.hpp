#pragma once

#include "qzlab/fock.hpp"
#include "qzlab/measurement.hpp"

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qzlab {

/// What a sampled trajectory does after a NO outcome.
enum class OnNo {
    RecordAndStop, // keep the NO record, count the trajectory as a failure
    Abort,         // drop the trajectory from the statistics
};

/// Sequential questions |alpha0 + k delta>, k = 1..steps, from |alpha0>.
struct DragConfig {
    cplx alpha0{10.0, 0.0};
    cplx delta{0.1, 0.0};
    std::size_t steps = 10;
    std::size_t dim = 0; // 0: size from the largest target amplitude
    DecisionPolicy policy = DecisionPolicy::force_yes();
    OnNo on_no = OnNo::RecordAndStop;
};

/// Apparatus basis rotating as |alpha0 + gamma sin(theta)>, theta = omega t,
/// observed at `substeps` equally spaced phases in (theta_start, theta_end].
struct LaskeyConfig {
    cplx alpha0{10.0, 0.0};
    cplx gamma{1.0, 0.0};
    double omega = 1.0;
    double theta_start = 0.0;
    double theta_end = std::numbers::pi / 2.0;
    std::size_t substeps = 100;
    bool observe = true;
    std::size_t dim = 0;
    DecisionPolicy policy = DecisionPolicy::force_yes();
    OnNo on_no = OnNo::RecordAndStop;
};

/// Two-level Rabi system started in |0>, measured `measurements` times
/// at equal intervals over total_time.
struct ZenoConfig {
    double rabi_frequency = 1.0;
    double total_time = std::numbers::pi;
    std::size_t measurements = 10;
    DecisionPolicy policy = DecisionPolicy::force_yes();
    OnNo on_no = OnNo::RecordAndStop;
};

struct ChainConfig {
    cplx c1{std::numbers::sqrt2 / 2.0, 0.0};
    cplx c2{std::numbers::sqrt2 / 2.0, 0.0};
    std::size_t apparatus_dim = 2;
};

struct StepRecord {
    std::size_t step;
    double phase_or_time;
    // coherent amplitude of the target (drag, laskey); 0 for the |0> target of zeno
    cplx target;
    double probability_yes;
    double cumulative;
    Outcome outcome;
};

struct ProtocolReport {
    std::vector<StepRecord> steps;
    double closed_form = 1.0;   // all-YES probability from the closed form
    double cumulative = 1.0;    // product of recorded probability_yes
    bool completed = true;      // every recorded step answered YES
    bool aborted = false;
    double final_fidelity = 1.0; // against the nominal terminal state
    StateVector final_state;
    StateVector nominal_terminal;
    std::size_t dim = 0;
    double truncation_fidelity = 1.0; // worst captured norm^2 among constructed states

    std::optional<double> first_order_approximation; // drag: (1 - |delta|^2)^N
    std::optional<double> single_shot;         // drag: |<alpha0|alpha0 + N delta>|^2
    std::optional<double> survival_at_double_n; // zeno: closed form with 2N measurements
    std::vector<std::string> warnings;
};

/// Exact sequential success probability exp(-N |delta|^2). The first-order
/// estimate (1 - |delta|^2)^N agrees to within N |delta|^4.
double drag_success_closed_form(cplx delta, std::size_t steps);

/// exp(-sum_k |gamma|^2 (sin theta_k - sin theta_{k-1})^2) over consecutive
/// phases. `thetas` must be strictly increasing.
double laskey_success_closed_form(cplx gamma, const std::vector<double>& thetas);

/// (cos^2(Omega T / 2N))^N
double zeno_survival_closed_form(double rabi_frequency, double total_time, std::size_t measurements);

/// Measurement phases theta_1..theta_M of the window; theta_M == theta_end.
std::vector<double> laskey_phases(const LaskeyConfig& cfg);

std::size_t drag_dim(const DragConfig& cfg);
std::size_t laskey_dim(const LaskeyConfig& cfg);

ProtocolReport amplitude_drag(const DragConfig& cfg);
ProtocolReport laskey_protocol(const LaskeyConfig& cfg);
ProtocolReport zeno_survival(const ZenoConfig& cfg);

struct ChainReport {
    StateVector composite;
    StateVector expected; // c1 |0>|0> + c2 |1>|1>
    double composite_error;
    DensityMatrix reduced_system;
    double max_off_diagonal;
    std::array<double, 2> system_populations;
    std::vector<double> apparatus_probabilities;
    double born_error; // max_i |P(reading i) - |c_i|^2|
};

/// Outcome o_1 is system index 0 and o_2 is index 1; reading i is apparatus
/// basis state |i>.
ChainReport von_neumann_chain(const ChainConfig& cfg);

struct OverlapRow {
    cplx alpha;
    cplx beta;
    double numeric;     // |<alpha|beta>|^2 on the truncated space
    double closed_form; // exp(-|alpha - beta|^2)
    double first_order; // 1 - |alpha - beta|^2
    double truncation_fidelity;
};

/// |<alpha0|alpha0 + delta>|^2 for each delta, on a shared truncation sized
/// for the largest amplitude unless `dim` is nonzero.
std::vector<OverlapRow> overlap_table(cplx alpha0, const std::vector<cplx>& deltas, std::size_t dim = 0);

using EnsembleProtocol = std::variant<DragConfig, LaskeyConfig, ZenoConfig>;

struct EnsembleStats {
    std::size_t n_traj = 0;
    std::size_t n_success = 0;
    std::size_t n_failed = 0;  // stopped on a recorded NO
    std::size_t n_aborted = 0; // dropped under OnNo::Abort
    double success_frequency = 0.0; // n_success / n_traj
    double mean_cumulative = 0.0;   // over non-aborted trajectories
    double closed_form = 0.0;
    double binomial_sigma = 0.0; // sqrt(p (1 - p) / n_traj) at p = closed_form
};

/// Independent sampled trajectories, trajectory i drawing from
/// rng_stream(master_seed, i). The result depends only on (protocol,
/// n_traj, master_seed), never on `threads` (0 = hardware concurrency).
EnsembleStats run_ensemble(const EnsembleProtocol& protocol, std::size_t n_traj,
                           std::uint64_t master_seed, unsigned threads = 0);

} // namespace qzlab
