#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geonet/network.hpp"

namespace geonet {

/// One delivered message, in delivery order. `kind` and `phase` point at
/// static strings owned by the protocol type.
struct TraceEvent {
    std::uint64_t index = 0;
    NodeId src = 0;
    NodeId dst = 0;
    std::string_view kind;
    std::uint32_t bits = 0;
    std::uint64_t causal_depth = 0;  // 0-based; chain length is depth+1
    std::string_view phase;
};

struct PhaseTotals {
    std::uint64_t messages = 0;
    std::uint64_t bits = 0;
    std::uint64_t max_causal_depth = 0;  // chain length (1-based)
};

/// Message/bit counters for one run. max_causal_depth is the length of the
/// longest chain of deliveries, the asynchronous time measure.
struct Ledger {
    std::uint64_t total_messages = 0;
    std::uint64_t total_bits = 0;
    std::uint64_t max_causal_depth = 0;
    std::map<std::pair<NodeId, NodeId>, std::pair<std::uint64_t, std::uint64_t>> per_edge_bits;
    std::map<std::string, PhaseTotals, std::less<>> phases;

    void record(const TraceEvent& ev) {
        total_messages += 1;
        total_bits += ev.bits;
        max_causal_depth = std::max(max_causal_depth, ev.causal_depth + 1);
        const NodeId lo = std::min(ev.src, ev.dst);
        const NodeId hi = std::max(ev.src, ev.dst);
        auto& [fwd, bwd] = per_edge_bits[{lo, hi}];
        (ev.src == lo ? fwd : bwd) += ev.bits;
        auto& ph = phases[std::string(ev.phase)];
        ph.messages += 1;
        ph.bits += ev.bits;
        ph.max_causal_depth = std::max(ph.max_causal_depth, ev.causal_depth + 1);
    }

    const PhaseTotals& phase(std::string_view name) const {
        static const PhaseTotals empty{};
        const auto it = phases.find(name);
        return it == phases.end() ? empty : it->second;
    }
};

inline std::string serialize_trace(const std::vector<TraceEvent>& trace) {
    std::ostringstream out;
    for (const auto& ev : trace) {
        out << ev.index << ' ' << ev.src << ' ' << ev.dst << ' ' << ev.kind << ' ' << ev.bits
            << ' ' << ev.causal_depth << ' ' << ev.phase << '\n';
    }
    return out.str();
}

/// Flat key-value document.
inline std::string serialize_ledger(const Ledger& ledger) {
    std::ostringstream out;
    out << "total_messages=" << ledger.total_messages << '\n';
    out << "total_bits=" << ledger.total_bits << '\n';
    out << "max_causal_depth=" << ledger.max_causal_depth << '\n';
    for (const auto& [name, ph] : ledger.phases) {
        out << "phase." << name << ".messages=" << ph.messages << '\n';
        out << "phase." << name << ".bits=" << ph.bits << '\n';
        out << "phase." << name << ".max_causal_depth=" << ph.max_causal_depth << '\n';
    }
    for (const auto& [edge, bits] : ledger.per_edge_bits) {
        out << "edge." << edge.first << '-' << edge.second << ".forward_bits=" << bits.first
            << '\n';
        out << "edge." << edge.first << '-' << edge.second << ".backward_bits=" << bits.second
            << '\n';
    }
    return out.str();
}

/// Re-asserts the CONGEST budget over a recorded trace; returns the number of
/// oversize messages (0 when the budget held).
inline std::size_t audit_trace_budget(const std::vector<TraceEvent>& trace,
                                      std::uint32_t budget_bits) {
    std::size_t violations = 0;
    for (const auto& ev : trace)
        if (ev.bits > budget_bits) ++violations;
    return violations;
}

}  // namespace geonet
