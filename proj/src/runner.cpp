#include "qzlab/runner.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <ostream>

namespace qzlab {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string step_csv(const std::vector<StepRecord>& steps) {
    std::string csv = "step,phase_or_time,target_re,target_im,prob_yes,cumulative_prob,outcome\n";
    for (const StepRecord& r : steps) {
        csv += fmt::format("{},{},{},{},{},{},{}\n", r.step, num(r.phase_or_time), num(r.target.real()),
                           num(r.target.imag()), num(r.probability_yes), num(r.cumulative), to_string(r.outcome));
    }
    return csv;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json report_json(const ProtocolReport& r) {
    json j;
    j["dim"] = r.dim;
    j["steps_recorded"] = r.steps.size();
    j["closed_form"] = r.closed_form;
    j["numeric"] = r.cumulative;
    j["abs_error"] = std::abs(r.cumulative - r.closed_form);
    j["completed"] = r.completed;
    j["final_fidelity"] = r.final_fidelity;
    j["truncation_fidelity"] = r.truncation_fidelity;
    return j;
}

json ensemble_json(const EnsembleStats& s) {
    json j;
    j["n_traj"] = s.n_traj;
    j["n_success"] = s.n_success;
    j["n_failed"] = s.n_failed;
    j["n_aborted"] = s.n_aborted;
    j["success_frequency"] = s.success_frequency;
    j["mean_cumulative"] = s.mean_cumulative;
    j["closed_form"] = s.closed_form;
    j["binomial_sigma"] = s.binomial_sigma;
    j["deviation_sigmas"] = s.binomial_sigma > 0.0
                                ? std::abs(s.success_frequency - s.closed_form) / s.binomial_sigma
                                : 0.0;
    return j;
}

template <typename Config>
void attach_ensemble(json& summary, const RunConfig& run, Config cfg) {
    if (run.n_traj == 0) {
        return;
    }
    cfg.policy = DecisionPolicy::sample_unbound();
    summary["monte_carlo"] = ensemble_json(run_ensemble(cfg, run.n_traj, run.seed, run.threads));
}

json header(const RunConfig& cfg) {
    json j;
    j["protocol"] = std::string(block_name(cfg.protocol));
    j["seed"] = cfg.seed;
    j["n_traj"] = cfg.n_traj;
    return j;
}

void finish(json& summary, const ProtocolReport& r) {
    if (!r.warnings.empty()) {
        summary["warnings"] = r.warnings;
    }
}

RunArtifacts drag_artifacts(const RunConfig& run, DragConfig cfg) {
    cfg.policy = DecisionPolicy::force_yes();
    const ProtocolReport r = amplitude_drag(cfg);
    json s = header(run);
    s["alpha0"] = complex_json(cfg.alpha0);
    s["delta"] = complex_json(cfg.delta);
    s["steps"] = cfg.steps;
    s.update(report_json(r));
    s["first_order_approximation"] = *r.first_order_approximation;
    s["single_shot"] = *r.single_shot;
    s["single_shot_closed_form"] =
        std::exp(-static_cast<double>(cfg.steps * cfg.steps) * std::norm(cfg.delta));
    attach_ensemble(s, run, cfg);
    finish(s, r);
    return {step_csv(r.steps), s.dump(2) + "\n", "drag.csv", "drag.summary.json"};
}

RunArtifacts laskey_artifacts(const RunConfig& run, LaskeyConfig cfg) {
    cfg.policy = DecisionPolicy::force_yes();
    const ProtocolReport r = laskey_protocol(cfg);
    json s = header(run);
    s["alpha0"] = complex_json(cfg.alpha0);
    s["gamma"] = complex_json(cfg.gamma);
    s["omega"] = cfg.omega;
    s["observe"] = cfg.observe;
    s["substeps"] = cfg.substeps;
    s["window_phase"] = json::array({cfg.theta_start, cfg.theta_end});
    s["window_time"] = json::array({cfg.theta_start / cfg.omega, cfg.theta_end / cfg.omega});
    s.update(report_json(r));
    if (cfg.observe) {
        attach_ensemble(s, run, cfg);
    }
    finish(s, r);
    return {step_csv(r.steps), s.dump(2) + "\n", "laskey.csv", "laskey.summary.json"};
}

RunArtifacts zeno_artifacts(const RunConfig& run, ZenoConfig cfg) {
    cfg.policy = DecisionPolicy::force_yes();
    const ProtocolReport r = zeno_survival(cfg);
    json s = header(run);
    s["rabi_frequency"] = cfg.rabi_frequency;
    s["total_time"] = cfg.total_time;
    s["measurements"] = cfg.measurements;
    s.update(report_json(r));
    s["survival_at_double_n"] = *r.survival_at_double_n;
    s["survival_increases_with_n"] = *r.survival_at_double_n > r.closed_form;
    attach_ensemble(s, run, cfg);
    finish(s, r);
    return {step_csv(r.steps), s.dump(2) + "\n", "zeno.csv", "zeno.summary.json"};
}

RunArtifacts chain_artifacts(const RunConfig& run, const ChainConfig& cfg) {
    const ChainReport r = von_neumann_chain(cfg);
    std::string csv = "system_index,apparatus_index,amp_re,amp_im,expected_re,expected_im\n";
    const std::size_t d = cfg.apparatus_dim;
    for (std::size_t i = 0; i < r.composite.dim(); ++i) {
        csv += fmt::format("{},{},{},{},{},{}\n", i / d, i % d, num(r.composite[i].real()),
                           num(r.composite[i].imag()), num(r.expected[i].real()), num(r.expected[i].imag()));
    }
    json s = header(run);
    s["c1"] = complex_json(cfg.c1);
    s["c2"] = complex_json(cfg.c2);
    s["apparatus_dim"] = d;
    s["composite_error"] = r.composite_error;
    json rho = json::array();
    for (std::size_t i = 0; i < 2; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < 2; ++j) {
            row.push_back(complex_json(r.reduced_system(i, j)));
        }
        rho.push_back(row);
    }
    s["reduced_system"] = rho;
    s["system_populations"] = r.system_populations;
    s["max_off_diagonal"] = r.max_off_diagonal;
    s["apparatus_probabilities"] = r.apparatus_probabilities;
    s["born_error"] = r.born_error;
    return {csv, s.dump(2) + "\n", "chain.csv", "chain.summary.json"};
}

RunArtifacts overlap_artifacts(const RunConfig& run, const OverlapTableConfig& cfg) {
    const std::vector<OverlapRow> rows = overlap_table(cfg.alpha0, cfg.deltas, cfg.dim);
    std::string csv = "alpha_re,alpha_im,beta_re,beta_im,numeric,closed_form,first_order,abs_error,truncation_fidelity\n";
    double worst = 0.0;
    for (const OverlapRow& r : rows) {
        const double err = std::abs(r.numeric - r.closed_form);
        worst = std::max(worst, err);
        csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", num(r.alpha.real()), num(r.alpha.imag()),
                           num(r.beta.real()), num(r.beta.imag()), num(r.numeric), num(r.closed_form),
                           num(r.first_order), num(err), num(r.truncation_fidelity));
    }
    json s = header(run);
    s["alpha0"] = complex_json(cfg.alpha0);
    s["rows"] = rows.size();
    s["max_abs_error"] = worst;
    double trunc = 1.0;
    for (const OverlapRow& r : rows) {
        trunc = std::min(trunc, r.truncation_fidelity);
    }
    s["truncation_fidelity"] = trunc;
    return {csv, s.dump(2) + "\n", "overlap_table.csv", "overlap_table.summary.json"};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << bytes;
    if (!f) {
        throw NumericError(fmt::format("cannot write {}", path.string()));
    }
}

} // namespace

RunArtifacts execute(const RunConfig& cfg) {
    return std::visit(
        [&](const auto& params) -> RunArtifacts {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, DragConfig>) {
                return drag_artifacts(cfg, params);
            } else if constexpr (std::is_same_v<T, LaskeyConfig>) {
                return laskey_artifacts(cfg, params);
            } else if constexpr (std::is_same_v<T, ZenoConfig>) {
                return zeno_artifacts(cfg, params);
            } else if constexpr (std::is_same_v<T, ChainConfig>) {
                return chain_artifacts(cfg, params);
            } else {
                return overlap_artifacts(cfg, params);
            }
        },
        cfg.params);
}

int report_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool quiet) {
    try {
        const RunArtifacts artifacts = execute(cfg);
        std::filesystem::create_directories(cfg.output);
        write_file(cfg.output / artifacts.csv_name, artifacts.csv);
        write_file(cfg.output / artifacts.summary_name, artifacts.summary);
        if (!quiet) {
            out << artifacts.summary;
            out << "wrote " << (cfg.output / artifacts.csv_name).string() << " and "
                << (cfg.output / artifacts.summary_name).string() << '\n';
        }
        return kExitOk;
    } catch (...) {
        return report_current_exception(err);
    }
}

} // namespace qzlab
