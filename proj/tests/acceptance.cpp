// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "qzlab/dynamics.hpp"
#include "qzlab/kernels.hpp"
#include "qzlab/protocols.hpp"
#include "support/invariants.hpp"
#include "support/oracles.hpp"

#include <fmt/format.h>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace qzlab;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
        }
        notes.push_back((ok ? "ok   " : "FAIL ") + what);
    }
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s; // <= 0: no runtime bound
    std::function<void(Verdict&)> body;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void overlap_reproduction(Verdict& o) {
    const std::size_t dim = default_dim(10.1);
    const double numeric = born_probability(coherent_state(10.0, dim).state, coherent_state(10.1, dim).state);
    const double exact = std::exp(-0.01);
    o.require(std::abs(numeric - exact) <= 1e-8,
              fmt::format("|<10|10.1>|^2 = {:.12f} vs e^-0.01 = {:.12f} (dim {})", numeric, exact, dim));
    o.require(std::abs(numeric - 0.99004983) <= 1e-8, "matches 0.99004983 within 1e-8");
    o.require(std::abs(numeric - 0.99) <= 5.1e-5, fmt::format("gap to 1 - delta^2 = 0.99 is {:.3e} <= 5.1e-5",
                                                               std::abs(numeric - 0.99)));
}

void drag_product(Verdict& o) {
    const ProtocolReport r = amplitude_drag(DragConfig{});
    const double first_order = std::pow(1.0 - 0.01, 10);
    o.require(std::abs(r.cumulative - 0.90483742) <= 1e-8, fmt::format("cumulative {:.12f} vs 0.90483742", r.cumulative));
    const double gap = std::abs(r.cumulative - first_order);
    o.require(gap <= 10 * 1e-4 && gap <= 1e-3, fmt::format("|cumulative - 0.99^10| = {:.3e} <= N delta^4 = 1e-3", gap));
    o.require(std::abs(*r.single_shot - 0.36787944) <= 1e-8,
              fmt::format("single-shot |<10|11>|^2 = {:.12f} vs 0.36787944", *r.single_shot));
    o.require(r.final_fidelity >= 1.0 - 1e-10, fmt::format("final fidelity with |11> = {:.15f}", r.final_fidelity));
}

void drag_monte_carlo(Verdict& o) {
    DragConfig cfg;
    cfg.policy = DecisionPolicy::sample_unbound();
    const EnsembleStats s = run_ensemble(cfg, 100000, 42);
    o.require(std::abs(s.success_frequency - 0.904837) <= 0.0028,
              fmt::format("frequency {:.6f} over 1e5 trajectories vs 0.904837 (|diff| {:.2e} <= 0.0028)",
                          s.success_frequency, std::abs(s.success_frequency - 0.904837)));
}

void zeno_sweep(Verdict& o) {
    const std::size_t ns[] = {1, 2, 5, 10, 100};
    double previous = -1.0;
    for (std::size_t n : ns) {
        ZenoConfig cfg;
        cfg.rabi_frequency = 1.0;
        cfg.total_time = pi;
        cfg.measurements = n;
        const double survival = zeno_survival(cfg).cumulative;
        const double oracle_value = oracle::zeno_closed(pi, n);
        o.require(std::abs(survival - oracle_value) <= 1e-10,
                  fmt::format("N={:3}: survival {:.10f}, oracle (cos^2(pi/2N))^N = {:.10f}", n, survival, oracle_value));
        o.require(survival > previous, fmt::format("N={:3}: strictly above the previous N", n));
        previous = survival;
        if (n == 1) {
            o.require(survival <= 1e-10, "N=1 survival is 0");
        } else if (n == 2) {
            o.require(std::abs(survival - 0.25) <= 1e-10, "N=2 survival is 0.25");
        } else if (n == 100) {
            o.require(std::abs(survival - 0.975627) <= 1e-6, "N=100 survival is 0.975627 +- 1e-6");
        }
    }
}

void laskey_suite(Verdict& o) {
    LaskeyConfig cfg;
    cfg.alpha0 = 10.0;
    cfg.gamma = 1.0;

    cfg.observe = false;
    const ProtocolReport idle = laskey_protocol(cfg);
    o.require(idle.final_fidelity == 1.0 && idle.steps.empty(), "observe=false: no measurements, fidelity exactly 1");
    cfg.observe = true;

    double previous = -1.0;
    for (std::size_t m : {1, 10, 100, 1000}) {
        cfg.substeps = m;
        const ProtocolReport r = laskey_protocol(cfg);
        o.require(r.cumulative > previous, fmt::format("M={:4}: success {:.10f} strictly increasing", m, r.cumulative));
        previous = r.cumulative;
        o.require(r.final_fidelity >= 1.0 - 1e-10, fmt::format("M={:4}: final fidelity with |alpha+gamma> {:.15f}", m,
                                                               r.final_fidelity));
        if (m == 1) {
            o.require(std::abs(r.cumulative - std::exp(-1.0)) <= 1e-8, "M=1 equals e^-1 within 1e-8");
        }
        if (m == 1000) {
            std::vector<cplx> amplitudes{cfg.alpha0};
            for (std::size_t k = 1; k <= m; ++k) {
                amplitudes.push_back(cfg.alpha0 + cfg.gamma * std::sin(pi / 2.0 * static_cast<double>(k) / 1000.0));
            }
            const double oracle_p = oracle::overlap_product(amplitudes);
            o.require(std::abs(r.cumulative - oracle_p) <= 1e-10,
                      fmt::format("M=1000 vs overlap-product oracle {:.10f} (|diff| {:.2e})", oracle_p,
                                  std::abs(r.cumulative - oracle_p)));
        }
    }
}

void chain_suite(Verdict& o) {
    const double h = std::numbers::sqrt2 / 2.0;
    const ChainReport even = von_neumann_chain({h, h, 2});
    o.require(even.max_off_diagonal <= 1e-14, fmt::format("equal split: off-diagonal {:.2e} <= 1e-14", even.max_off_diagonal));
    o.require(std::abs(even.system_populations[0] - 0.5) <= 1e-12 && std::abs(even.system_populations[1] - 0.5) <= 1e-12,
              "equal split: diagonal (0.5, 0.5)");
    const ChainReport skewed = von_neumann_chain({std::sqrt(0.3), std::sqrt(0.7), 2});
    o.require(std::abs(skewed.apparatus_probabilities[0] - 0.3) <= 1e-12 &&
                  std::abs(skewed.apparatus_probabilities[1] - 0.7) <= 1e-12,
              fmt::format("(0.3, 0.7): apparatus readings ({:.15f}, {:.15f})", skewed.apparatus_probabilities[0],
                          skewed.apparatus_probabilities[1]));
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QZLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void invariant_suites(Verdict& o) {
    for (const auto& check : testing::all_invariants()) {
        const auto failure = check.run(20240601);
        o.require(!failure, fmt::format("[{}] {}{}", check.module, check.name, failure ? ": " + *failure : ""));
    }

    const fs::path scratch = fs::temp_directory_path() / "qzlab_acceptance_cli";
    fs::remove_all(scratch);
    std::vector<fs::path> configs;
    for (const auto& entry : fs::directory_iterator(QZLAB_CONFIG_DIR)) {
        if (entry.path().extension() == ".yaml") {
            configs.push_back(entry.path());
        }
    }
    std::sort(configs.begin(), configs.end());
    o.require(!configs.empty(), fmt::format("{} example configs found", configs.size()));
    for (const fs::path& config : configs) {
        const std::string stem = config.stem().string();
        std::string protocol = stem.substr(0, stem.find('_'));
        if (stem == "overlap_table") {
            protocol = "overlap-table";
        }
        const fs::path a = scratch / stem / "a";
        const fs::path b = scratch / stem / "b";
        const int ca = run_cli(fmt::format("{} --config {} --out {} --quiet", protocol, config.string(), a.string()));
        const int cb = run_cli(fmt::format("{} --config {} --out {} --quiet", protocol, config.string(), b.string()));
        bool identical = ca == 0 && cb == 0;
        std::size_t files = 0;
        if (identical) {
            for (const auto& f : fs::directory_iterator(a)) {
                ++files;
                identical = identical && slurp(f.path()) == slurp(b / f.path().filename());
            }
        }
        o.require(identical && files == 2,
                  fmt::format("CLI double run of {} byte-identical (exit {} / {}, {} files)", config.filename().string(),
                              ca, cb, files));
    }
    fs::remove_all(scratch);
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "overlap |<alpha|alpha+delta>|^2 at alpha=10, delta=0.1", 1.0, overlap_reproduction},
        {2, "sequential drag product, delta=0.1, N=10", 1.0, drag_product},
        {3, "Monte Carlo drag frequency, 1e5 trajectories", 30.0, drag_monte_carlo},
        {4, "Zeno survival sweep at Omega T = pi", 1.0, zeno_sweep},
        {5, "Laskey observation suite", 5.0, laskey_suite},
        {6, "von Neumann chain suite", 0.0, chain_suite},
        {7, "invariant suites and CLI determinism", 0.0, invariant_suites},
    };

    fmt::print("qzlab acceptance (kernels: {})\n", kernels::active().name);
    int failures = 0;
    for (const Criterion& c : criteria) {
        Verdict o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.require(false, fmt::format("threw: {}", e.what()));
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0) {
            o.require(seconds < c.time_limit_s, fmt::format("runtime {:.3f} s < {} s", seconds, c.time_limit_s));
        }
        fmt::print("{} [{}] {} ({:.3f} s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, seconds);
        for (const std::string& note : o.notes) {
            fmt::print("       {}\n", note);
        }
        failures += o.pass ? 0 : 1;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
