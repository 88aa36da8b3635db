#pragma once

#include "qzlab/protocols.hpp"

#include <functional>

namespace qzlab::detail {

struct ScheduledStep {
    double phase_or_time;
    cplx label;
    StateVector target;
};

/// A fixed sequence of yes/no questions, optionally separated by unitary
/// evolution. Built once per configuration and shared read-only by every
/// trajectory of an ensemble.
struct Schedule {
    StateVector initial;
    std::vector<ScheduledStep> steps;
    std::function<StateVector(const StateVector&)> evolve_between; // empty: none
    StateVector nominal_terminal;
    // A forced YES on a zero-probability branch records survival 0 and
    // continues from the target instead of raising DegenerateBranch.
    bool tolerate_impossible_forced_yes = false;
};

struct TrajectoryResult {
    std::vector<StepRecord> records;
    double cumulative = 1.0;
    bool completed = true;
    bool aborted = false;
    StateVector final_state;
};

TrajectoryResult run_schedule(const Schedule& schedule, const DecisionPolicy& policy, OnNo on_no);

Schedule drag_schedule(const DragConfig& cfg, double* truncation_fidelity);
Schedule laskey_schedule(const LaskeyConfig& cfg, double* truncation_fidelity);
Schedule zeno_schedule(const ZenoConfig& cfg);

double closed_form_for(const DragConfig& cfg);
double closed_form_for(const LaskeyConfig& cfg);
double closed_form_for(const ZenoConfig& cfg);

} // namespace qzlab::detail
