// qzlab: batch runner for the repeated-measurement protocols.
//
//   qzlab <drag|laskey|zeno|chain|overlap-table> --config run.yaml [--seed N] [--out DIR] [--quiet]

#include "qzlab/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    bool quiet = false;
};

void add_common(CLI::App* sub, Options& opts) {
    sub->add_option("--config", opts.config, "YAML run configuration")->required();
    sub->add_option("--seed", opts.seed, "master seed (overrides the config)");
    sub->add_option("--out", opts.out, "output directory (overrides the config)");
    sub->add_option("--threads", opts.threads, "ensemble worker threads, 0 = all cores");
    sub->add_flag("--quiet", opts.quiet, "do not print the summary");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repeated-measurement dynamics on truncated Fock spaces"};
    app.require_subcommand(1);

    Options opts;
    const std::pair<const char*, qzlab::ProtocolKind> commands[] = {
        {"drag", qzlab::ProtocolKind::Drag},
        {"laskey", qzlab::ProtocolKind::Laskey},
        {"zeno", qzlab::ProtocolKind::Zeno},
        {"chain", qzlab::ProtocolKind::Chain},
        {"overlap-table", qzlab::ProtocolKind::OverlapTable},
    };
    for (const auto& [name, kind] : commands) {
        add_common(app.add_subcommand(name, std::string("run the ") + name + " protocol"), opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qzlab::kExitParse;
    }

    qzlab::ProtocolKind requested = qzlab::ProtocolKind::Drag;
    for (const auto& [name, kind] : commands) {
        if (app.got_subcommand(name)) {
            requested = kind;
        }
    }

    qzlab::RunConfig cfg;
    try {
        cfg = qzlab::load_config(opts.config);
        if (cfg.protocol != requested) {
            throw qzlab::ValidationError("config holds a '" + std::string(qzlab::block_name(cfg.protocol)) +
                                         "' block but the subcommand asks for '" +
                                         std::string(qzlab::block_name(requested)) + "'");
        }
    } catch (...) {
        return qzlab::report_current_exception(std::cerr);
    }
    if (opts.seed) {
        cfg.seed = *opts.seed;
    }
    if (opts.out) {
        cfg.output = *opts.out;
    }
    if (opts.threads) {
        cfg.threads = *opts.threads;
    }
    return qzlab::run(cfg, std::cout, std::cerr, opts.quiet);
}
