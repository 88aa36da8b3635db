#include "qzlab/protocols.hpp"

#include "schedule.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace qzlab {

namespace {

enum class Fate : unsigned char { Success, Failed, Aborted };

struct TrajectorySummary {
    Fate fate = Fate::Failed;
    double cumulative = 0.0;
};

struct Prepared {
    detail::Schedule schedule;
    OnNo on_no;
    double closed_form;
};

template <typename Config>
Prepared prepare(const Config& cfg, detail::Schedule schedule) {
    if (cfg.policy.mode() != DecisionPolicy::Mode::Sample) {
        throw ValidationError("run_ensemble: protocol must use the sampling policy");
    }
    return {std::move(schedule), cfg.on_no, detail::closed_form_for(cfg)};
}

Prepared prepare(const EnsembleProtocol& protocol) {
    return std::visit(
        [](const auto& cfg) -> Prepared {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, DragConfig>) {
                return prepare(cfg, detail::drag_schedule(cfg, nullptr));
            } else if constexpr (std::is_same_v<T, LaskeyConfig>) {
                return prepare(cfg, detail::laskey_schedule(cfg, nullptr));
            } else {
                return prepare(cfg, detail::zeno_schedule(cfg));
            }
        },
        protocol);
}

} // namespace

EnsembleStats run_ensemble(const EnsembleProtocol& protocol, std::size_t n_traj, std::uint64_t master_seed,
                           unsigned threads) {
    if (n_traj < 1) {
        throw ValidationError("run_ensemble: n_traj must be >= 1");
    }
    const Prepared prepared = prepare(protocol);

    std::vector<TrajectorySummary> results(n_traj);
    auto run_one = [&](std::size_t index) {
        UniformStream stream = rng_stream(master_seed, index);
        const detail::TrajectoryResult r =
            detail::run_schedule(prepared.schedule, DecisionPolicy::sample(stream), prepared.on_no);
        results[index] = {r.aborted ? Fate::Aborted : r.completed ? Fate::Success : Fate::Failed, r.cumulative};
    };

    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_traj));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_traj; ++i) {
            run_one(i);
        }
    } else {
        // Strided split; each worker records the first trajectory that threw.
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::size_t> error_index(workers, n_traj);
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t i = w; i < n_traj; i += workers) {
                        try {
                            run_one(i);
                        } catch (...) {
                            errors[w] = std::current_exception();
                            error_index[w] = i;
                            return;
                        }
                    }
                });
            }
        }
        // Rethrow the error of the lowest trajectory index, as a sequential run would.
        const auto first = std::min_element(error_index.begin(), error_index.end());
        if (*first != n_traj) {
            std::rethrow_exception(errors[static_cast<std::size_t>(first - error_index.begin())]);
        }
    }

    EnsembleStats stats;
    stats.n_traj = n_traj;
    stats.closed_form = prepared.closed_form;
    double cumulative_sum = 0.0;
    for (const TrajectorySummary& t : results) {
        switch (t.fate) {
        case Fate::Success:
            ++stats.n_success;
            break;
        case Fate::Failed:
            ++stats.n_failed;
            break;
        case Fate::Aborted:
            ++stats.n_aborted;
            continue;
        }
        cumulative_sum += t.cumulative;
    }
    const std::size_t kept = n_traj - stats.n_aborted;
    stats.success_frequency = static_cast<double>(stats.n_success) / static_cast<double>(n_traj);
    stats.mean_cumulative = kept > 0 ? cumulative_sum / static_cast<double>(kept) : 0.0;
    const double p = stats.closed_form;
    stats.binomial_sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n_traj));
    return stats;
}

} // namespace qzlab
