#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geonet/cellgrid.hpp"
#include "geonet/kernel.hpp"
#include "geonet/tree.hpp"

namespace geonet {

/// A node location together with the owning node id. Positions are distinct
/// network-wide, so ordering by (pos, id) equals ordering by pos.
struct PointId {
    GridPoint pos{};
    NodeId id = 0;

    friend constexpr auto operator<=>(const PointId&, const PointId&) = default;
};

namespace dist_detail {

/// Per-line extremes over (pos, id) items; identical arithmetic and
/// tie-breaks as the sequential kernel, so the convergecast fold is bit-exact
/// against geom_core regardless of tree shape or arrival order.
inline std::vector<std::pair<PointId, PointId>> fold_lines(const std::vector<PointId>& items,
                                                           const DirectionSet& dirs) {
    std::vector<std::pair<PointId, PointId>> lines;
    lines.reserve(dirs.line_count());
    for (std::size_t i = 0; i < dirs.line_count(); ++i) {
        const UnitDir u = dirs.unit(i);
        PointId max_p = items[0];
        PointId min_p = items[0];
        double max_d = u.dot(items[0].pos);
        double min_d = max_d;
        for (std::size_t j = 1; j < items.size(); ++j) {
            const double d = u.dot(items[j].pos);
            if (d > max_d || (d == max_d && items[j].pos < max_p.pos)) {
                max_d = d;
                max_p = items[j];
            }
            if (d < min_d || (d == min_d && items[j].pos < min_p.pos)) {
                min_d = d;
                min_p = items[j];
            }
        }
        lines.push_back({max_p, min_p});
    }
    return lines;
}

inline std::vector<PointId> dedup_lines(const std::vector<std::pair<PointId, PointId>>& lines) {
    std::vector<PointId> flat;
    flat.reserve(2 * lines.size());
    for (const auto& [mx, mn] : lines) {
        flat.push_back(mx);
        flat.push_back(mn);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    return flat;
}

/// Exact farthest pair among the kernel items, smallest pair lexicographic.
inline std::pair<PointId, PointId> farthest_pair(const std::vector<PointId>& items) {
    std::vector<PointId> sorted = items;
    std::sort(sorted.begin(), sorted.end());
    std::pair<PointId, PointId> best{sorted[0], sorted.size() > 1 ? sorted[1] : sorted[0]};
    std::int64_t best_d = squared_distance(best.first.pos, best.second.pos);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            const std::int64_t d = squared_distance(sorted[i].pos, sorted[j].pos);
            if (d > best_d) {
                best = {sorted[i], sorted[j]};
                best_d = d;
            }
        }
    }
    return best;
}

}  // namespace dist_detail

// ---------------------------------------------------------------------------
// Kernel chain protocol: spanning-tree bootstrap, then the leader triggers a
// convergecast of per-line extreme points. Depending on the mode the leader
// afterwards broadcasts the farthest kernel pair (diameter) or the kernel
// hull vertices in counterclockwise order (hull).

class EpsKernelChainProtocol {
public:
    enum class Mode : std::uint8_t { kernel, diameter, hull };

    enum class Kind : std::uint8_t {
        probe,
        accept,
        reject,
        done,
        start,
        point,
        set_end,
        pair_a,
        pair_b,
        hull_vertex
    };

    struct Message {
        Kind kind = Kind::probe;
        GridPoint pos{};
        NodeId owner = 0;
        std::uint64_t count = 0;
        bool last = false;
    };

    struct Node {
        NodeId id = 0;
        GridPoint pos{};
        TreeState tree;
        bool started = false;
        std::size_t sets_pending = 0;
        std::vector<PointId> gathered;
        std::vector<std::pair<PointId, PointId>> kernel_lines;  // this node's fold
        std::vector<PointId> kernel;                            // deduplicated
        std::optional<PointId> pair_hi, pair_lo;
        std::vector<PointId> hull_seq;
        bool hull_done = false;
        bool on_hull = false;
        NodeId cw = 0, ccw = 0;
    };

    struct Factory {
        static Message probe() { return {Kind::probe}; }
        static Message accept() { return {Kind::accept}; }
        static Message reject() { return {Kind::reject}; }
        static Message done(std::uint64_t count) {
            Message m{Kind::done};
            m.count = count;
            return m;
        }
    };

    EpsKernelChainProtocol(const GeoNetwork& net, double epsilon, Mode mode)
        : mode_(mode),
          dirs_(DirectionSet::make(epsilon)),
          schema_(BitSchema::make(net.size(), net.grid_side(), 10)) {}

    const DirectionSet& directions() const { return dirs_; }

    Node make_node(const NodeInit& init) {
        Node n;
        n.id = init.id;
        n.pos = init.position;
        return n;
    }

    template <class Ctx>
    void on_wakeup(Ctx& ctx, Node& node) {
        tree_on_wakeup(ctx, node.tree, Factory{}, [&] { begin_kernel(ctx, node); });
    }

    template <class Ctx>
    void on_receive(Ctx& ctx, Node& node, int from_port, const Message& msg) {
        switch (msg.kind) {
            case Kind::probe:
            case Kind::accept:
            case Kind::reject:
            case Kind::done:
                tree_on_message(ctx, node.tree, static_cast<TreeMsg>(msg.kind), msg.count,
                                from_port, Factory{}, [&] { begin_kernel(ctx, node); });
                return;
            case Kind::start:
                begin_kernel(ctx, node);
                return;
            case Kind::point:
                node.gathered.push_back({msg.pos, msg.owner});
                return;
            case Kind::set_end:
                --node.sets_pending;
                if (node.sets_pending == 0) finish_fold(ctx, node);
                return;
            case Kind::pair_a:
            case Kind::pair_b: {
                (msg.kind == Kind::pair_a ? node.pair_hi : node.pair_lo) =
                    PointId{msg.pos, msg.owner};
                const Message copy = msg;
                for (const int p : node.tree.child_ports) ctx.send(p, copy);
                return;
            }
            case Kind::hull_vertex: {
                node.hull_seq.push_back({msg.pos, msg.owner});
                const Message copy = msg;
                for (const int p : node.tree.child_ports) ctx.send(p, copy);
                if (msg.last) derive_hull_view(node);
                return;
            }
        }
    }

    std::uint32_t bit_size(const Message& msg) const {
        switch (msg.kind) {
            case Kind::probe:
            case Kind::accept:
            case Kind::reject:
            case Kind::start:
            case Kind::set_end:
                return schema_.tag_bits;
            case Kind::done:
                return schema_.tag_bits + schema_.counter_bits;
            case Kind::point:
            case Kind::pair_a:
            case Kind::pair_b:
                return schema_.tag_bits + schema_.point_bits + schema_.id_bits;
            case Kind::hull_vertex:
                return schema_.tag_bits + schema_.point_bits + schema_.id_bits + 1;
        }
        throw SchemaError("unknown message kind");
    }

    static std::string_view kind_name(const Message& msg) {
        switch (msg.kind) {
            case Kind::probe: return "probe";
            case Kind::accept: return "accept";
            case Kind::reject: return "reject";
            case Kind::done: return "done";
            case Kind::start: return "start";
            case Kind::point: return "point";
            case Kind::set_end: return "set_end";
            case Kind::pair_a: return "pair_a";
            case Kind::pair_b: return "pair_b";
            case Kind::hull_vertex: return "hull_vertex";
        }
        return "?";
    }

    static std::string_view phase_of(const Message& msg) {
        switch (msg.kind) {
            case Kind::probe:
            case Kind::accept:
            case Kind::reject:
            case Kind::done:
                return "spanning_tree";
            case Kind::start:
            case Kind::point:
            case Kind::set_end:
                return "kernel";
            case Kind::pair_a:
            case Kind::pair_b:
                return "diameter_broadcast";
            case Kind::hull_vertex:
                return "hull_broadcast";
        }
        return "?";
    }

private:
    template <class Ctx>
    void begin_kernel(Ctx& ctx, Node& node) {
        if (node.started) return;
        node.started = true;
        node.sets_pending = node.tree.child_ports.size();
        node.gathered.clear();
        node.gathered.push_back({node.pos, node.id});
        for (const int p : node.tree.child_ports) ctx.send(p, Message{Kind::start});
        if (node.sets_pending == 0) finish_fold(ctx, node);
    }

    template <class Ctx>
    void finish_fold(Ctx& ctx, Node& node) {
        node.kernel_lines = dist_detail::fold_lines(node.gathered, dirs_);
        node.kernel = dist_detail::dedup_lines(node.kernel_lines);
        if (ctx.self() == 0) {
            finalize_leader(ctx, node);
            return;
        }
        for (const PointId& item : node.kernel) {
            Message m{Kind::point};
            m.pos = item.pos;
            m.owner = item.id;
            ctx.send(node.tree.parent_port, m);
        }
        ctx.send(node.tree.parent_port, Message{Kind::set_end});
    }

    template <class Ctx>
    void finalize_leader(Ctx& ctx, Node& node) {
        switch (mode_) {
            case Mode::kernel:
                return;
            case Mode::diameter: {
                auto [a, b] = dist_detail::farthest_pair(node.kernel);
                node.pair_hi = a;
                node.pair_lo = b;
                Message ma{Kind::pair_a};
                ma.pos = a.pos;
                ma.owner = a.id;
                Message mb{Kind::pair_b};
                mb.pos = b.pos;
                mb.owner = b.id;
                for (const int p : node.tree.child_ports) {
                    ctx.send(p, ma);
                    ctx.send(p, mb);
                }
                return;
            }
            case Mode::hull: {
                std::vector<GridPoint> pts;
                pts.reserve(node.kernel.size());
                for (const auto& item : node.kernel) pts.push_back(item.pos);
                const HullPolygon hull = convex_hull(pts);
                std::map<GridPoint, NodeId> owner;
                for (const auto& item : node.kernel) owner[item.pos] = item.id;
                node.hull_seq.clear();
                for (const GridPoint& v : hull.vertices)
                    node.hull_seq.push_back({v, owner.at(v)});
                for (std::size_t i = 0; i < node.hull_seq.size(); ++i) {
                    Message m{Kind::hull_vertex};
                    m.pos = node.hull_seq[i].pos;
                    m.owner = node.hull_seq[i].id;
                    m.last = (i + 1 == node.hull_seq.size());
                    for (const int p : node.tree.child_ports) ctx.send(p, m);
                }
                derive_hull_view(node);
                return;
            }
        }
    }

    static void derive_hull_view(Node& node) {
        node.hull_done = true;
        const std::size_t len = node.hull_seq.size();
        for (std::size_t i = 0; i < len; ++i) {
            if (node.hull_seq[i].id == node.id) {
                node.on_hull = true;
                node.cw = node.hull_seq[(i + len - 1) % len].id;
                node.ccw = node.hull_seq[(i + 1) % len].id;
                return;
            }
        }
        node.on_hull = false;
    }

    Mode mode_;
    DirectionSet dirs_;
    BitSchema schema_;
};

// ---------------------------------------------------------------------------
// Closest-pair protocol: binary search over cell indices by counting
// convergecasts, then a decision convergecast inside the chosen cell. All
// choices are deterministic, so answers are schedule independent.

class ClosestPairProtocol {
public:
    enum class Kind : std::uint8_t {
        probe,
        accept,
        reject,
        done,
        start,
        count,
        cell,
        decision,
        decision_end,
        answer_a,
        answer_b
    };

    struct Message {
        Kind kind = Kind::probe;
        std::uint32_t s = 0;
        std::uint32_t e = 0;
        std::uint64_t value = 0;
        GridPoint pos{};
    };

    struct Round {
        std::uint32_t s = 0;
        std::uint32_t e = 0;
        std::uint64_t count_left = 0;  // nodes with cell index in [s, mid]
        std::uint64_t n_active = 0;    // nodes with cell index in [s, e]
    };

    struct Node {
        NodeId id = 0;
        GridPoint pos{};
        std::uint32_t cell = 0;
        std::uint64_t n = 0;
        TreeState tree;
        // counting round
        std::uint32_t cur_s = 0, cur_e = 0;
        std::size_t counts_pending = 0;
        std::uint64_t acc = 0;
        // decision sweep
        std::size_t ends_pending = 0;
        bool in_cell = false;
        std::vector<GridPoint> best;  // at most 2, lexicographically smallest
        std::optional<GridPoint> ans_a, ans_b;
        // leader bookkeeping
        std::uint64_t n_active = 0;
        std::vector<Round> rounds;
        std::uint32_t chosen_cell = 0;
        std::uint64_t chosen_cell_count = 0;
    };

    struct Factory {
        static Message probe() { return {Kind::probe}; }
        static Message accept() { return {Kind::accept}; }
        static Message reject() { return {Kind::reject}; }
        static Message done(std::uint64_t count) {
            Message m{Kind::done};
            m.value = count;
            return m;
        }
    };

    ClosestPairProtocol(const GeoNetwork& net, const CellGrid& grid)
        : grid_(grid),
          schema_(BitSchema::make(net.size(), net.grid_side(), 11, grid.cell_count())) {}

    const CellGrid& grid() const { return grid_; }

    Node make_node(const NodeInit& init) {
        Node n;
        n.id = init.id;
        n.pos = init.position;
        n.cell = grid_.index_of(init.position);
        n.n = init.n;
        return n;
    }

    template <class Ctx>
    void on_wakeup(Ctx& ctx, Node& node) {
        tree_on_wakeup(ctx, node.tree, Factory{}, [&] { leader_begin(ctx, node); });
    }

    template <class Ctx>
    void on_receive(Ctx& ctx, Node& node, int from_port, const Message& msg) {
        switch (msg.kind) {
            case Kind::probe:
            case Kind::accept:
            case Kind::reject:
            case Kind::done:
                tree_on_message(ctx, node.tree, static_cast<TreeMsg>(msg.kind), msg.value,
                                from_port, Factory{}, [&] { leader_begin(ctx, node); });
                return;
            case Kind::start: {
                begin_round(node, msg.s, msg.e);
                const Message copy = msg;
                for (const int p : node.tree.child_ports) ctx.send(p, copy);
                maybe_send_count(ctx, node);
                return;
            }
            case Kind::count:
                node.acc += msg.value;
                --node.counts_pending;
                maybe_send_count(ctx, node);
                return;
            case Kind::cell: {
                begin_decision(node, msg.s);
                const Message copy = msg;
                for (const int p : node.tree.child_ports) ctx.send(p, copy);
                maybe_send_decisions(ctx, node);
                return;
            }
            case Kind::decision:
                keep_best(node, msg.pos);
                return;
            case Kind::decision_end:
                --node.ends_pending;
                maybe_send_decisions(ctx, node);
                return;
            case Kind::answer_a:
            case Kind::answer_b: {
                (msg.kind == Kind::answer_a ? node.ans_a : node.ans_b) = msg.pos;
                const Message copy = msg;
                for (const int p : node.tree.child_ports) ctx.send(p, copy);
                return;
            }
        }
    }

    std::uint32_t bit_size(const Message& msg) const {
        switch (msg.kind) {
            case Kind::probe:
            case Kind::accept:
            case Kind::reject:
            case Kind::decision_end:
                return schema_.tag_bits;
            case Kind::done:
                return schema_.tag_bits + schema_.counter_bits;
            case Kind::start:
                return schema_.tag_bits + 2 * schema_.cell_bits;
            case Kind::count:
                return schema_.tag_bits + 2 * schema_.cell_bits + schema_.counter_bits;
            case Kind::cell:
                return schema_.tag_bits + schema_.cell_bits;
            case Kind::decision:
            case Kind::answer_a:
            case Kind::answer_b:
                return schema_.tag_bits + schema_.point_bits;
        }
        throw SchemaError("unknown message kind");
    }

    static std::string_view kind_name(const Message& msg) {
        switch (msg.kind) {
            case Kind::probe: return "probe";
            case Kind::accept: return "accept";
            case Kind::reject: return "reject";
            case Kind::done: return "done";
            case Kind::start: return "start";
            case Kind::count: return "count";
            case Kind::cell: return "cell";
            case Kind::decision: return "decision";
            case Kind::decision_end: return "decision_end";
            case Kind::answer_a: return "answer_a";
            case Kind::answer_b: return "answer_b";
        }
        return "?";
    }

    static std::string_view phase_of(const Message& msg) {
        switch (msg.kind) {
            case Kind::probe:
            case Kind::accept:
            case Kind::reject:
            case Kind::done:
                return "spanning_tree";
            case Kind::count:
            case Kind::cell:
            case Kind::decision:
            case Kind::decision_end:
                return "closest_search";
            case Kind::start:
            case Kind::answer_a:
            case Kind::answer_b:
                return "closest_broadcast";
        }
        return "?";
    }

private:
    static std::uint32_t mid(std::uint32_t s, std::uint32_t e) { return (s + e) / 2; }

    void begin_round(Node& node, std::uint32_t s, std::uint32_t e) {
        node.cur_s = s;
        node.cur_e = e;
        node.counts_pending = node.tree.child_ports.size();
        node.acc = (node.cell >= s && node.cell <= mid(s, e)) ? 1 : 0;
    }

    void begin_decision(Node& node, std::uint32_t cell) {
        node.chosen_cell = cell;
        node.in_cell = (node.cell == cell);
        node.ends_pending = node.tree.child_ports.size();
        node.best.clear();
        if (node.in_cell) node.best.push_back(node.pos);
    }

    void keep_best(Node& node, GridPoint pos) {
        node.best.push_back(pos);
        std::sort(node.best.begin(), node.best.end());
        if (node.best.size() > 2) node.best.resize(2);
    }

    template <class Ctx>
    void leader_begin(Ctx& ctx, Node& node) {
        node.n_active = node.n;
        if (grid_.cell_count() == 1) {
            leader_pick_cell(ctx, node, 1, node.n);
            return;
        }
        leader_start_round(ctx, node, 1, grid_.cell_count());
    }

    template <class Ctx>
    void leader_start_round(Ctx& ctx, Node& node, std::uint32_t s, std::uint32_t e) {
        if (s == e) {
            // Pigeonhole: the interval was chosen with more nodes than cells.
            leader_pick_cell(ctx, node, s, node.n_active);
            return;
        }
        begin_round(node, s, e);
        Message m{Kind::start};
        m.s = s;
        m.e = e;
        for (const int p : node.tree.child_ports) ctx.send(p, m);
        // counts_pending > 0 for n >= 2; the fold completes in on_receive.
    }

    template <class Ctx>
    void maybe_send_count(Ctx& ctx, Node& node) {
        if (node.counts_pending != 0) return;
        if (ctx.self() != 0) {
            Message m{Kind::count};
            m.s = node.cur_s;
            m.e = node.cur_e;
            m.value = node.acc;
            ctx.send(node.tree.parent_port, m);
            return;
        }
        // Leader: interval counted.
        const std::uint32_t s = node.cur_s;
        const std::uint32_t e = node.cur_e;
        const std::uint64_t left = node.acc;
        node.rounds.push_back({s, e, left, node.n_active});
        if (e - s == 1) {
            if (left >= 2) {
                leader_pick_cell(ctx, node, s, left);
            } else {
                leader_pick_cell(ctx, node, e, node.n_active - left);
            }
            return;
        }
        const std::uint64_t cells_left = mid(s, e) - s + 1;
        if (left > cells_left) {
            node.n_active = left;
            leader_start_round(ctx, node, s, mid(s, e));
        } else {
            node.n_active -= left;
            leader_start_round(ctx, node, mid(s, e) + 1, e);
        }
    }

    template <class Ctx>
    void leader_pick_cell(Ctx& ctx, Node& node, std::uint32_t cell, std::uint64_t occupancy) {
        node.chosen_cell_count = occupancy;
        begin_decision(node, cell);
        Message m{Kind::cell};
        m.s = cell;
        for (const int p : node.tree.child_ports) ctx.send(p, m);
        maybe_send_decisions(ctx, node);
    }

    template <class Ctx>
    void maybe_send_decisions(Ctx& ctx, Node& node) {
        if (node.ends_pending != 0) return;
        if (ctx.self() != 0) {
            for (const GridPoint& pos : node.best) {
                Message m{Kind::decision};
                m.pos = pos;
                ctx.send(node.tree.parent_port, m);
            }
            ctx.send(node.tree.parent_port, Message{Kind::decision_end});
            return;
        }
        if (node.best.size() < 2)
            throw Error("closest-pair: chosen cell held fewer than 2 locations");
        node.ans_a = node.best[0];
        node.ans_b = node.best[1];
        Message ma{Kind::answer_a};
        ma.pos = node.best[0];
        Message mb{Kind::answer_b};
        mb.pos = node.best[1];
        for (const int p : node.tree.child_ports) {
            ctx.send(p, ma);
            ctx.send(p, mb);
        }
    }

    CellGrid grid_;
    BitSchema schema_;
};

}  // namespace geonet
