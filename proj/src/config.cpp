#include "qzlab/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

namespace qzlab {

std::string_view block_name(ProtocolKind kind) noexcept {
    switch (kind) {
    case ProtocolKind::Drag:
        return "drag";
    case ProtocolKind::Laskey:
        return "laskey";
    case ProtocolKind::Zeno:
        return "zeno";
    case ProtocolKind::Chain:
        return "chain";
    case ProtocolKind::OverlapTable:
        return "overlap_table";
    }
    return "?";
}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? -1 : node.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) {
    const int line = line_of(node);
    throw ParseError(line > 0 ? fmt::format("line {}: {}: {}", line, field, what) : fmt::format("{}: {}", field, what),
                     line, field);
}

// Checks a mapping against its allowed keys; rejects anything unknown.
class Block {
public:
    Block(YAML::Node node, std::string path, std::initializer_list<const char*> allowed)
        : node_(std::move(node)), path_(std::move(path)) {
        if (!node_.IsMap()) {
            fail(node_, path_, "expected a mapping");
        }
        const std::set<std::string> known(allowed.begin(), allowed.end());
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!known.contains(key)) {
                fail(kv.first, field(key), "unknown key");
            }
        }
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const char* key) const { return static_cast<bool>(node_[key]); }

    YAML::Node required(const char* key) const {
        YAML::Node n = node_[key];
        if (!n) {
            fail(node_, field(key), "required key is missing");
        }
        return n;
    }

    double real(const char* key) const { return to_real(required(key), field(key)); }
    double real_or(const char* key, double fallback) const { return has(key) ? real(key) : fallback; }

    cplx complex(const char* key) const { return to_complex(required(key), field(key)); }
    cplx complex_or(const char* key, cplx fallback) const { return has(key) ? complex(key) : fallback; }

    std::uint64_t count(const char* key) const { return to_count(required(key), field(key)); }
    std::uint64_t count_or(const char* key, std::uint64_t fallback) const {
        return has(key) ? count(key) : fallback;
    }

    bool flag_or(const char* key, bool fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const YAML::Node n = node_[key];
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            fail(n, field(key), "expected true or false");
        }
    }

    OnNo on_no() const {
        if (!has("on_no")) {
            return OnNo::RecordAndStop;
        }
        const YAML::Node n = node_["on_no"];
        const std::string v = n.IsScalar() ? n.Scalar() : "";
        if (v == "record_and_stop") {
            return OnNo::RecordAndStop;
        }
        if (v == "abort") {
            return OnNo::Abort;
        }
        fail(n, field("on_no"), "expected record_and_stop or abort");
    }

    static double to_real(const YAML::Node& n, const std::string& field) {
        if (!n.IsScalar()) {
            fail(n, field, "expected a number");
        }
        double v = 0.0;
        try {
            v = n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, field, fmt::format("expected a number, got '{}'", n.Scalar()));
        }
        if (!std::isfinite(v)) {
            throw ValidationError(fmt::format("{} must be finite", field));
        }
        return v;
    }

    // A bare number is real; [re, im] is complex.
    static cplx to_complex(const YAML::Node& n, const std::string& field) {
        if (n.IsSequence()) {
            if (n.size() != 2) {
                fail(n, field, "complex values are written [re, im]");
            }
            return {to_real(n[0], field + "[0]"), to_real(n[1], field + "[1]")};
        }
        return {to_real(n, field), 0.0};
    }

    static std::uint64_t to_count(const YAML::Node& n, const std::string& field) {
        if (!n.IsScalar() || n.Scalar().empty() || n.Scalar().front() == '-') {
            fail(n, field, "expected a non-negative integer");
        }
        try {
            return n.as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            fail(n, field, fmt::format("expected a non-negative integer, got '{}'", n.Scalar()));
        }
    }

    const YAML::Node& node() const { return node_; }

private:
    YAML::Node node_;
    std::string path_;
};

DragConfig parse_drag(const Block& b) {
    DragConfig cfg;
    cfg.alpha0 = b.complex("alpha0");
    cfg.delta = b.complex("delta");
    cfg.steps = b.count("steps");
    cfg.dim = b.count_or("dim", 0);
    cfg.on_no = b.on_no();
    if (cfg.steps < 1) {
        throw ValidationError("drag.steps must be >= 1");
    }
    return cfg;
}

LaskeyConfig parse_laskey(const Block& b) {
    LaskeyConfig cfg;
    cfg.alpha0 = b.complex("alpha0");
    cfg.gamma = b.complex("gamma");
    cfg.omega = b.real_or("omega", 1.0);
    cfg.substeps = b.count("substeps");
    cfg.observe = b.flag_or("observe", true);
    cfg.dim = b.count_or("dim", 0);
    cfg.on_no = b.on_no();
    if (b.has("window_pi")) {
        const YAML::Node w = b.required("window_pi");
        if (!w.IsSequence() || w.size() != 2) {
            fail(w, b.field("window_pi"), "expected [start, end] in multiples of pi");
        }
        cfg.theta_start = Block::to_real(w[0], b.field("window_pi[0]")) * std::numbers::pi;
        cfg.theta_end = Block::to_real(w[1], b.field("window_pi[1]")) * std::numbers::pi;
    }
    if (cfg.substeps < 1) {
        throw ValidationError("laskey.substeps must be >= 1");
    }
    if (!(cfg.theta_start < cfg.theta_end)) {
        throw ValidationError("laskey.window_pi must satisfy start < end");
    }
    if (!(cfg.omega > 0.0)) {
        throw ValidationError("laskey.omega must be > 0");
    }
    return cfg;
}

ZenoConfig parse_zeno(const Block& b) {
    ZenoConfig cfg;
    cfg.rabi_frequency = b.real("rabi_frequency");
    cfg.total_time = b.real("total_time");
    cfg.measurements = b.count("measurements");
    cfg.on_no = b.on_no();
    if (!(cfg.rabi_frequency > 0.0)) {
        throw ValidationError("zeno.rabi_frequency must be > 0");
    }
    if (!(cfg.total_time > 0.0)) {
        throw ValidationError("zeno.total_time must be > 0");
    }
    if (cfg.measurements < 1) {
        throw ValidationError("zeno.measurements must be >= 1");
    }
    return cfg;
}

ChainConfig parse_chain(const Block& b) {
    ChainConfig cfg;
    cfg.c1 = b.complex("c1");
    cfg.c2 = b.complex("c2");
    cfg.apparatus_dim = b.count_or("apparatus_dim", 2);
    const double total = std::norm(cfg.c1) + std::norm(cfg.c2);
    if (!(std::abs(total - 1.0) <= tol::kNorm)) {
        throw ValidationError(fmt::format("chain: |c1|^2 + |c2|^2 = {:.17g}, expected 1", total));
    }
    if (cfg.apparatus_dim < 2) {
        throw ValidationError("chain.apparatus_dim must be >= 2 (the system dimension)");
    }
    return cfg;
}

OverlapTableConfig parse_overlap(const Block& b) {
    OverlapTableConfig cfg;
    cfg.alpha0 = b.complex("alpha0");
    cfg.dim = b.count_or("dim", 0);
    const YAML::Node list = b.required("deltas");
    if (!list.IsSequence()) {
        fail(list, b.field("deltas"), "expected a list of deltas");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        cfg.deltas.push_back(Block::to_complex(list[i], fmt::format("{}[{}]", b.field("deltas"), i)));
    }
    if (cfg.deltas.empty()) {
        throw ValidationError("overlap_table.deltas must not be empty");
    }
    return cfg;
}

} // namespace

RunConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ParseError(fmt::format("line {}: {}", e.mark.line + 1, e.msg), e.mark.line + 1);
    }
    if (!root.IsMap()) {
        throw ParseError("config must be a mapping at the top level");
    }
    const Block top(root, "",
                    {"seed", "n_traj", "threads", "output", "drag", "laskey", "zeno", "chain", "overlap_table"});

    RunConfig cfg;
    cfg.seed = top.count_or("seed", 0);
    cfg.n_traj = top.count_or("n_traj", 0);
    cfg.threads = static_cast<unsigned>(top.count_or("threads", 0));
    if (top.has("output")) {
        const YAML::Node out = root["output"];
        if (!out.IsScalar() || out.Scalar().empty()) {
            fail(out, "output", "expected a directory path");
        }
        cfg.output = out.Scalar();
    }

    std::vector<ProtocolKind> present;
    for (ProtocolKind kind : {ProtocolKind::Drag, ProtocolKind::Laskey, ProtocolKind::Zeno, ProtocolKind::Chain,
                              ProtocolKind::OverlapTable}) {
        if (root[std::string(block_name(kind))]) {
            present.push_back(kind);
        }
    }
    if (present.size() != 1) {
        throw ValidationError(fmt::format("config must contain exactly one protocol block, found {}", present.size()));
    }
    cfg.protocol = present.front();
    const std::string name(block_name(cfg.protocol));
    const YAML::Node node = root[name];
    switch (cfg.protocol) {
    case ProtocolKind::Drag:
        cfg.params = parse_drag(Block(node, name, {"alpha0", "delta", "steps", "dim", "on_no"}));
        break;
    case ProtocolKind::Laskey:
        cfg.params = parse_laskey(Block(
            node, name, {"alpha0", "gamma", "omega", "window_pi", "substeps", "observe", "dim", "on_no"}));
        break;
    case ProtocolKind::Zeno:
        cfg.params = parse_zeno(Block(node, name, {"rabi_frequency", "total_time", "measurements", "on_no"}));
        break;
    case ProtocolKind::Chain:
        cfg.params = parse_chain(Block(node, name, {"c1", "c2", "apparatus_dim"}));
        break;
    case ProtocolKind::OverlapTable:
        cfg.params = parse_overlap(Block(node, name, {"alpha0", "deltas", "dim"}));
        break;
    }
    if (cfg.n_traj > 0 && (cfg.protocol == ProtocolKind::Chain || cfg.protocol == ProtocolKind::OverlapTable)) {
        throw ValidationError(fmt::format("n_traj applies only to drag, laskey and zeno, not {}", name));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(fmt::format("cannot open config file {}", path.string()));
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

} // namespace qzlab
