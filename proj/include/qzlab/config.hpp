#pragma once

#include "qzlab/protocols.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qzlab {

enum class ProtocolKind { Drag, Laskey, Zeno, Chain, OverlapTable };

/// Config block / subcommand name: drag, laskey, zeno, chain, overlap_table.
std::string_view block_name(ProtocolKind kind) noexcept;

struct OverlapTableConfig {
    cplx alpha0{10.0, 0.0};
    std::vector<cplx> deltas;
    std::size_t dim = 0;
};

using ProtocolParams = std::variant<DragConfig, LaskeyConfig, ZenoConfig, ChainConfig, OverlapTableConfig>;

struct RunConfig {
    ProtocolKind protocol = ProtocolKind::Drag;
    ProtocolParams params;
    std::uint64_t seed = 0;
    std::size_t n_traj = 0; // 0: forced-yes analysis only
    unsigned threads = 0;
    std::filesystem::path output = ".";
};

/// Parses the YAML run configuration (schema in README). Unknown keys,
/// malformed values and missing required keys raise ParseError with the
/// offending line and field; well-formed documents that break an invariant
/// raise ValidationError.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

} // namespace qzlab
