#include "qzlab/protocols.hpp"

#include "qzlab/dynamics.hpp"
#include "schedule.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace qzlab {

namespace detail {

namespace {

void require_finite(cplx z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ValidationError(fmt::format("{} must be finite", what));
    }
}

void validate(const DragConfig& cfg) {
    require_finite(cfg.alpha0, "drag.alpha0");
    require_finite(cfg.delta, "drag.delta");
    if (cfg.steps < 1) {
        throw ValidationError("drag.steps must be >= 1");
    }
}

void validate(const LaskeyConfig& cfg) {
    require_finite(cfg.alpha0, "laskey.alpha0");
    require_finite(cfg.gamma, "laskey.gamma");
    if (!std::isfinite(cfg.omega) || !(cfg.omega > 0.0)) {
        throw ValidationError("laskey.omega must be finite and > 0");
    }
    if (!std::isfinite(cfg.theta_start) || !std::isfinite(cfg.theta_end) || !(cfg.theta_start < cfg.theta_end)) {
        throw ValidationError("laskey window needs finite theta_start < theta_end");
    }
    if (cfg.substeps < 1) {
        throw ValidationError("laskey.substeps must be >= 1");
    }
}

void validate(const ZenoConfig& cfg) {
    if (!std::isfinite(cfg.rabi_frequency) || !(cfg.rabi_frequency > 0.0)) {
        throw ValidationError("zeno.rabi_frequency must be finite and > 0");
    }
    if (!std::isfinite(cfg.total_time) || !(cfg.total_time > 0.0)) {
        throw ValidationError("zeno.total_time must be finite and > 0");
    }
    if (cfg.measurements < 1) {
        throw ValidationError("zeno.measurements must be >= 1");
    }
}

// Largest multiple of pi not above theta; sin vanishes there, so it stands in
// for the unobserved starting state |alpha0> in the jump sum.
double unobserved_reference_phase(double theta) {
    return std::floor(theta / std::numbers::pi) * std::numbers::pi;
}

} // namespace

TrajectoryResult run_schedule(const Schedule& schedule, const DecisionPolicy& policy, OnNo on_no) {
    TrajectoryResult out;
    out.records.reserve(schedule.steps.size());
    StateVector state = schedule.initial;
    for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
        const ScheduledStep& step = schedule.steps[k];
        if (schedule.evolve_between) {
            state = schedule.evolve_between(state);
        }
        if (schedule.tolerate_impossible_forced_yes && policy.mode() == DecisionPolicy::Mode::ForceYes) {
            const double p = born_probability(state, step.target);
            if (p < tol::kZeroNorm) {
                out.cumulative *= p;
                out.records.push_back({k + 1, step.phase_or_time, step.label, p, out.cumulative, Outcome::Yes});
                state = step.target;
                continue;
            }
        }
        MeasurementResult m = binary_measure(state, step.target, policy);
        if (m.outcome == Outcome::No && on_no == OnNo::Abort) {
            out.aborted = true;
            out.completed = false;
            state = std::move(m.post_state);
            break;
        }
        out.cumulative *= m.probability_yes;
        out.records.push_back(
            {k + 1, step.phase_or_time, step.label, m.probability_yes, out.cumulative, m.outcome});
        state = std::move(m.post_state);
        if (m.outcome == Outcome::No) {
            out.completed = false;
            break;
        }
    }
    out.final_state = std::move(state);
    return out;
}

Schedule drag_schedule(const DragConfig& cfg, double* truncation_fidelity) {
    validate(cfg);
    const std::size_t dim = drag_dim(cfg);
    double worst = 1.0;
    auto build = [&](cplx alpha) {
        CoherentState c = coherent_state(alpha, dim);
        worst = std::min(worst, c.truncation_fidelity);
        return std::move(c.state);
    };
    Schedule s;
    s.initial = build(cfg.alpha0);
    s.steps.reserve(cfg.steps);
    for (std::size_t k = 1; k <= cfg.steps; ++k) {
        const cplx alpha = cfg.alpha0 + static_cast<double>(k) * cfg.delta;
        s.steps.push_back({static_cast<double>(k), alpha, build(alpha)});
    }
    s.nominal_terminal = s.steps.back().target;
    if (truncation_fidelity) {
        *truncation_fidelity = worst;
    }
    return s;
}

Schedule laskey_schedule(const LaskeyConfig& cfg, double* truncation_fidelity) {
    validate(cfg);
    const std::size_t dim = laskey_dim(cfg);
    double worst = 1.0;
    auto build = [&](cplx alpha) {
        CoherentState c = coherent_state(alpha, dim);
        worst = std::min(worst, c.truncation_fidelity);
        return std::move(c.state);
    };
    Schedule s;
    s.initial = build(cfg.alpha0);
    if (cfg.observe) {
        for (double theta : laskey_phases(cfg)) {
            const cplx alpha = cfg.alpha0 + cfg.gamma * std::sin(theta);
            s.steps.push_back({theta, alpha, build(alpha)});
        }
        s.nominal_terminal = s.steps.back().target;
    } else {
        s.nominal_terminal = s.initial;
    }
    if (truncation_fidelity) {
        *truncation_fidelity = worst;
    }
    return s;
}

Schedule zeno_schedule(const ZenoConfig& cfg) {
    validate(cfg);
    const HilbertSpec qubit = HilbertSpec::single(2);
    const double dt = cfg.total_time / static_cast<double>(cfg.measurements);
    Schedule s;
    s.initial = StateVector::basis(qubit, 0);
    s.nominal_terminal = s.initial;
    for (std::size_t k = 1; k <= cfg.measurements; ++k) {
        s.steps.push_back({dt * static_cast<double>(k), cplx{0.0, 0.0}, s.initial});
    }
    const RabiHamiltonian h{cfg.rabi_frequency};
    s.evolve_between = [h, dt](const StateVector& psi) { return evolve_rabi(psi, h, dt); };
    s.tolerate_impossible_forced_yes = true;
    return s;
}

double closed_form_for(const DragConfig& cfg) { return drag_success_closed_form(cfg.delta, cfg.steps); }

double closed_form_for(const LaskeyConfig& cfg) {
    if (!cfg.observe) {
        return 1.0;
    }
    std::vector<double> thetas = laskey_phases(cfg);
    thetas.insert(thetas.begin(), unobserved_reference_phase(cfg.theta_start));
    return laskey_success_closed_form(cfg.gamma, thetas);
}

double closed_form_for(const ZenoConfig& cfg) {
    return zeno_survival_closed_form(cfg.rabi_frequency, cfg.total_time, cfg.measurements);
}

} // namespace detail

double drag_success_closed_form(cplx delta, std::size_t steps) {
    if (steps < 1) {
        throw ValidationError("drag_success_closed_form: steps must be >= 1");
    }
    return std::exp(-static_cast<double>(steps) * std::norm(delta));
}

double laskey_success_closed_form(cplx gamma, const std::vector<double>& thetas) {
    double jump_sum = 0.0;
    for (std::size_t k = 1; k < thetas.size(); ++k) {
        if (!(thetas[k] > thetas[k - 1])) {
            throw ValidationError("laskey_success_closed_form: phases must be strictly increasing");
        }
        const double jump = std::sin(thetas[k]) - std::sin(thetas[k - 1]);
        jump_sum += jump * jump;
    }
    return std::exp(-std::norm(gamma) * jump_sum);
}

double zeno_survival_closed_form(double rabi_frequency, double total_time, std::size_t measurements) {
    if (measurements < 1) {
        throw ValidationError("zeno_survival_closed_form: measurements must be >= 1");
    }
    const double n = static_cast<double>(measurements);
    const double c = std::cos(rabi_frequency * total_time / (2.0 * n));
    return std::pow(c * c, n);
}

std::vector<double> laskey_phases(const LaskeyConfig& cfg) {
    const std::size_t m = cfg.substeps;
    std::vector<double> thetas(m);
    const double width = cfg.theta_end - cfg.theta_start;
    for (std::size_t k = 1; k < m; ++k) {
        thetas[k - 1] = cfg.theta_start + width * static_cast<double>(k) / static_cast<double>(m);
    }
    thetas[m - 1] = cfg.theta_end;
    return thetas;
}

std::size_t drag_dim(const DragConfig& cfg) {
    if (cfg.dim != 0) {
        return cfg.dim;
    }
    // |alpha0 + k delta| is convex in k, so an endpoint is the largest target.
    const cplx last = cfg.alpha0 + static_cast<double>(cfg.steps) * cfg.delta;
    return default_dim(std::max(std::abs(cfg.alpha0), std::abs(last)));
}

std::size_t laskey_dim(const LaskeyConfig& cfg) {
    if (cfg.dim != 0) {
        return cfg.dim;
    }
    const double largest = std::max({std::abs(cfg.alpha0), std::abs(cfg.alpha0 + cfg.gamma),
                                     std::abs(cfg.alpha0 - cfg.gamma)});
    return default_dim(largest);
}

namespace {

ProtocolReport assemble(const detail::Schedule& schedule, detail::TrajectoryResult run, double closed_form) {
    ProtocolReport report;
    report.steps = std::move(run.records);
    report.closed_form = closed_form;
    report.cumulative = run.cumulative;
    report.completed = run.completed;
    report.aborted = run.aborted;
    report.final_state = std::move(run.final_state);
    report.nominal_terminal = schedule.nominal_terminal;
    report.final_fidelity = born_probability(report.final_state, report.nominal_terminal);
    report.dim = schedule.initial.dim();
    return report;
}

} // namespace

ProtocolReport amplitude_drag(const DragConfig& cfg) {
    double truncation = 1.0;
    const detail::Schedule schedule = detail::drag_schedule(cfg, &truncation);
    ProtocolReport report =
        assemble(schedule, detail::run_schedule(schedule, cfg.policy, cfg.on_no), detail::closed_form_for(cfg));
    report.truncation_fidelity = truncation;
    report.first_order_approximation = std::pow(1.0 - std::norm(cfg.delta), static_cast<double>(cfg.steps));
    report.single_shot = born_probability(schedule.initial, schedule.nominal_terminal);
    if (std::abs(cfg.delta) >= std::abs(cfg.alpha0) && std::abs(cfg.delta) > 0.0) {
        report.warnings.push_back(fmt::format("|delta| = {} is not small compared to |alpha0| = {}",
                                              std::abs(cfg.delta), std::abs(cfg.alpha0)));
    }
    return report;
}

ProtocolReport laskey_protocol(const LaskeyConfig& cfg) {
    double truncation = 1.0;
    const detail::Schedule schedule = detail::laskey_schedule(cfg, &truncation);
    ProtocolReport report =
        assemble(schedule, detail::run_schedule(schedule, cfg.policy, cfg.on_no), detail::closed_form_for(cfg));
    report.truncation_fidelity = truncation;
    return report;
}

ProtocolReport zeno_survival(const ZenoConfig& cfg) {
    const detail::Schedule schedule = detail::zeno_schedule(cfg);
    ProtocolReport report =
        assemble(schedule, detail::run_schedule(schedule, cfg.policy, cfg.on_no), detail::closed_form_for(cfg));
    report.survival_at_double_n =
        zeno_survival_closed_form(cfg.rabi_frequency, cfg.total_time, 2 * cfg.measurements);
    return report;
}

ChainReport von_neumann_chain(const ChainConfig& cfg) {
    const double total = std::norm(cfg.c1) + std::norm(cfg.c2);
    if (!(std::abs(total - 1.0) <= tol::kNorm)) {
        throw ValidationError(fmt::format("chain: |c1|^2 + |c2|^2 = {:.17g}, expected 1", total));
    }
    const StateVector system(HilbertSpec::single(2), {cfg.c1, cfg.c2});
    StateVector composite = premeasurement_unitary(system, cfg.apparatus_dim);

    const std::size_t d = cfg.apparatus_dim;
    std::vector<cplx> expected_amps(2 * d, cplx{0.0, 0.0});
    expected_amps[0 * d + 0] = cfg.c1;
    expected_amps[1 * d + 1] = cfg.c2;
    StateVector expected(composite.spec(), std::move(expected_amps));

    double composite_error = 0.0;
    for (std::size_t i = 0; i < composite.dim(); ++i) {
        composite_error = std::max(composite_error, std::abs(composite[i] - expected[i]));
    }

    const DensityMatrix joint = density_of(composite);
    DensityMatrix reduced = partial_trace(joint, 0);
    const DensityMatrix apparatus = partial_trace(joint, 1);

    std::vector<double> readings(d);
    for (std::size_t i = 0; i < d; ++i) {
        readings[i] = apparatus(i, i).real();
    }
    double born_error = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double want = i == 0 ? std::norm(cfg.c1) : i == 1 ? std::norm(cfg.c2) : 0.0;
        born_error = std::max(born_error, std::abs(readings[i] - want));
    }
    const double off = reduced.max_off_diagonal();
    const std::array<double, 2> populations{reduced(0, 0).real(), reduced(1, 1).real()};
    return ChainReport{std::move(composite), std::move(expected), composite_error, std::move(reduced),
                       off, populations, std::move(readings), born_error};
}

std::vector<OverlapRow> overlap_table(cplx alpha0, const std::vector<cplx>& deltas, std::size_t dim) {
    if (dim == 0) {
        double largest = std::abs(alpha0);
        for (const cplx& d : deltas) {
            largest = std::max(largest, std::abs(alpha0 + d));
        }
        dim = default_dim(largest);
    }
    const CoherentState base = coherent_state(alpha0, dim);
    std::vector<OverlapRow> rows;
    rows.reserve(deltas.size());
    for (const cplx& d : deltas) {
        const cplx beta = alpha0 + d;
        const CoherentState shifted = coherent_state(beta, dim);
        rows.push_back({alpha0, beta, born_probability(base.state, shifted.state),
                        std::norm(coherent_overlap_closed_form(alpha0, beta)), 1.0 - std::norm(d),
                        std::min(base.truncation_fidelity, shifted.truncation_fidelity)});
    }
    return rows;
}

} // namespace qzlab
