#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geonet/dist_geo.hpp"

namespace geonet {

struct RunConfig {
    SchedulerPolicy policy = SchedulerPolicy::restricted();
    std::uint64_t seed = 1;
    RunLimits limits;
};

/// Final outcome of one distributed run. `node_answers` mirrors what each
/// node's local state holds at quiescence (the all-learn requirement).
struct AlgorithmResult {
    std::string algorithm;
    double epsilon = 0.0;
    std::uint64_t k_requested = 0;

    std::vector<PointId> kernel;  // leader's S_L, deduplicated, sorted by position
    std::vector<std::pair<PointId, PointId>> kernel_lines;

    std::optional<std::pair<PointId, PointId>> pair;
    double pair_distance = 0.0;

    std::vector<PointId> hull;  // CCW canonical

    std::uint32_t cells = 0;
    std::uint64_t k_guarantee = 0;  // min(cols, rows)^2 of the realized grid
    double cell_diagonal = 0.0;
    std::uint32_t chosen_cell = 0;
    std::uint64_t chosen_cell_count = 0;
    std::vector<ClosestPairProtocol::Round> rounds;

    struct NodeAnswer {
        bool has_answer = false;
        std::optional<std::pair<GridPoint, GridPoint>> pair;
        bool on_hull = false;
        NodeId cw = 0, ccw = 0;
        std::vector<PointId> hull;
    };
    std::vector<NodeAnswer> node_answers;

    SpanningTree tree;
    Ledger ledger;
    std::vector<TraceEvent> trace;
};

namespace runner_detail {

template <class Nodes>
void fill_common(AlgorithmResult& out, const GeoNetwork& net, const Nodes& nodes) {
    out.tree = extract_tree(net, nodes, [](const auto& n) -> const TreeState& { return n.tree; });
}

inline AlgorithmResult run_kernel_chain(const GeoNetwork& net, double epsilon,
                                        EpsKernelChainProtocol::Mode mode,
                                        const RunConfig& cfg) {
    EpsKernelChainProtocol proto(net, epsilon, mode);
    auto res = run_protocol(net, std::move(proto), cfg.policy, cfg.seed, cfg.limits);

    AlgorithmResult out;
    out.epsilon = epsilon;
    runner_detail::fill_common(out, net, res.nodes);

    const auto& leader = res.nodes[0];
    out.kernel = leader.kernel;
    out.kernel_lines = leader.kernel_lines;
    out.node_answers.resize(net.size());

    using Mode = EpsKernelChainProtocol::Mode;
    if (mode == Mode::kernel) {
        out.algorithm = "kernel";
        out.node_answers[0].has_answer = !leader.kernel.empty();
    } else if (mode == Mode::diameter) {
        out.algorithm = "diameter";
        for (NodeId u = 0; u < net.size(); ++u) {
            const auto& node = res.nodes[u];
            auto& view = out.node_answers[u];
            if (node.pair_hi && node.pair_lo) {
                view.has_answer = true;
                view.pair = {node.pair_hi->pos, node.pair_lo->pos};
            }
        }
        if (leader.pair_hi && leader.pair_lo) {
            out.pair = {*leader.pair_hi, *leader.pair_lo};
            out.pair_distance = distance(leader.pair_hi->pos, leader.pair_lo->pos);
        }
    } else {
        out.algorithm = "hull";
        out.hull = leader.hull_seq;
        for (NodeId u = 0; u < net.size(); ++u) {
            const auto& node = res.nodes[u];
            auto& view = out.node_answers[u];
            view.has_answer = node.hull_done;
            view.on_hull = node.on_hull;
            view.cw = node.cw;
            view.ccw = node.ccw;
            view.hull = node.hull_seq;
        }
    }
    out.ledger = std::move(res.ledger);
    out.trace = std::move(res.trace);
    return out;
}

}  // namespace runner_detail

inline AlgorithmResult run_eps_kernel(const GeoNetwork& net, double epsilon,
                                      const RunConfig& cfg = {}) {
    return runner_detail::run_kernel_chain(net, epsilon, EpsKernelChainProtocol::Mode::kernel,
                                           cfg);
}

inline AlgorithmResult run_eps_diameter(const GeoNetwork& net, double epsilon,
                                        const RunConfig& cfg = {}) {
    if (net.size() < 2) throw ParameterError("run_eps_diameter: need at least 2 nodes");
    return runner_detail::run_kernel_chain(net, epsilon, EpsKernelChainProtocol::Mode::diameter,
                                           cfg);
}

inline AlgorithmResult run_eps_hull(const GeoNetwork& net, double epsilon,
                                    const RunConfig& cfg = {}) {
    return runner_detail::run_kernel_chain(net, epsilon, EpsKernelChainProtocol::Mode::hull, cfg);
}

/// k = 0 selects the default cell grid (the ceil(sqrt n) x floor(sqrt(n-1))
/// subdivision); otherwise a sqrt(k) x sqrt(k) grid is used, requiring
/// 2 <= k <= n-1.
inline AlgorithmResult run_closest_pair(const GeoNetwork& net, std::uint64_t k = 0,
                                        const RunConfig& cfg = {}) {
    const std::size_t n = net.size();
    if (n < 2) throw ParameterError("run_closest_pair: need at least 2 nodes");
    const CellGrid grid = k == 0 ? CellGrid::theorem_grid(n, net.grid_side())
                                 : CellGrid::square_grid(k, n, net.grid_side());

    ClosestPairProtocol proto(net, grid);
    auto res = run_protocol(net, std::move(proto), cfg.policy, cfg.seed, cfg.limits);

    AlgorithmResult out;
    out.algorithm = "closest_pair";
    out.k_requested = k;
    out.cells = grid.cell_count();
    const std::int64_t side = std::min(grid.cols, grid.rows);
    out.k_guarantee = static_cast<std::uint64_t>(side * side);
    out.cell_diagonal = grid.diagonal();
    runner_detail::fill_common(out, net, res.nodes);

    const auto& leader = res.nodes[0];
    out.rounds = leader.rounds;
    out.chosen_cell = leader.chosen_cell;
    out.chosen_cell_count = leader.chosen_cell_count;

    std::map<GridPoint, NodeId> by_pos;
    for (NodeId u = 0; u < n; ++u) by_pos[net.positions()[u]] = u;

    out.node_answers.resize(n);
    for (NodeId u = 0; u < n; ++u) {
        const auto& node = res.nodes[u];
        auto& view = out.node_answers[u];
        if (node.ans_a && node.ans_b) {
            view.has_answer = true;
            view.pair = {*node.ans_a, *node.ans_b};
        }
    }
    if (leader.ans_a && leader.ans_b) {
        out.pair = {PointId{*leader.ans_a, by_pos.at(*leader.ans_a)},
                    PointId{*leader.ans_b, by_pos.at(*leader.ans_b)}};
        out.pair_distance = distance(*leader.ans_a, *leader.ans_b);
    }
    out.ledger = std::move(res.ledger);
    out.trace = std::move(res.trace);
    return out;
}

}  // namespace geonet
