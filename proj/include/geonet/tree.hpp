#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "geonet/simulator.hpp"

namespace geonet {

/// Rooted tree overlay produced by the bootstrap.
struct SpanningTree {
    NodeId leader = 0;
    std::vector<NodeId> parent;                 // parent[leader] == leader
    std::vector<std::vector<NodeId>> children;  // sorted
    std::uint64_t tree_diameter = 0;            // longest leaf-to-leaf path, edges
};

namespace detail {
inline std::pair<NodeId, std::uint64_t> farthest_on_tree(const SpanningTree& tree, NodeId from) {
    std::vector<std::int64_t> dist(tree.parent.size(), -1);
    std::deque<NodeId> queue{from};
    dist[from] = 0;
    NodeId best = from;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (dist[u] > dist[best]) best = u;
        auto visit = [&](NodeId v) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        };
        if (tree.parent[u] != u) visit(tree.parent[u]);
        for (const NodeId v : tree.children[u]) visit(v);
    }
    return {best, static_cast<std::uint64_t>(dist[best])};
}
}  // namespace detail

inline void compute_tree_diameter(SpanningTree& tree) {
    const auto [a, _] = detail::farthest_on_tree(tree, tree.leader);
    tree.tree_diameter = detail::farthest_on_tree(tree, a).second;
}

/// Checks the SpanningTree invariants against its network.
inline bool validate_tree(const GeoNetwork& net, const SpanningTree& tree, std::string* why = nullptr) {
    const auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t n = net.size();
    if (tree.parent.size() != n || tree.children.size() != n) return fail("size mismatch");
    if (tree.leader >= n || tree.parent[tree.leader] != tree.leader)
        return fail("leader must be its own parent");
    std::size_t edge_count = 0;
    for (NodeId u = 0; u < n; ++u) {
        if (u == tree.leader) continue;
        const NodeId p = tree.parent[u];
        if (p >= n || p == u) return fail("non-leader maps to itself");
        const auto& row = net.neighbors(u);
        if (!std::binary_search(row.begin(), row.end(), p))
            return fail("tree edge is not a network edge");
        const auto& kids = tree.children[p];
        if (!std::binary_search(kids.begin(), kids.end(), u))
            return fail("parent/children inconsistent");
        ++edge_count;
    }
    std::size_t child_total = 0;
    for (const auto& kids : tree.children) child_total += kids.size();
    if (child_total != edge_count || edge_count != n - 1) return fail("not spanning");
    // Acyclicity + reachability from the leader.
    std::vector<char> seen(n, 0);
    std::deque<NodeId> queue{tree.leader};
    seen[tree.leader] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (const NodeId v : tree.children[u]) {
            if (seen[v]) return fail("cycle");
            seen[v] = 1;
            ++reached;
            queue.push_back(v);
        }
    }
    if (reached != n) return fail("leader does not reach all nodes");
    return true;
}

// ---------------------------------------------------------------------------
// Node-side bootstrap state machine. The initiator (node 0) floods probes;
// every node adopts the first sender as parent, answers each probe with
// accept/reject, and reports subtree completion upward. Message kinds are
// protocol-specific; a factory supplies them.
//
// The leader identity (fixed: node 0) and the adoption ties are scheduler
// degrees of freedom: different policies yield different trees, and no
// algorithm answer may depend on the shape (the geometry protocols'
// deterministic tie-breaks make their results tree-independent; tested).

struct TreeState {
    bool adopted = false;
    int parent_port = -1;  // -1 for the leader
    std::vector<int> child_ports;
    int pending_replies = 0;
    int pending_done = 0;
    bool done_sent = false;
    bool complete = false;
    std::uint64_t subtree_size = 1;
};

enum class TreeMsg : std::uint8_t { probe, accept, reject, done };

namespace tree_detail {

template <class Ctx, class Factory, class OnComplete>
void check_complete(Ctx& ctx, TreeState& st, const Factory& factory, OnComplete&& on_leader) {
    if (!st.adopted || st.complete || st.pending_replies != 0 || st.pending_done != 0) return;
    st.complete = true;
    if (ctx.self() == 0) {
        on_leader();
    } else if (!st.done_sent) {
        st.done_sent = true;
        ctx.send(st.parent_port, factory.done(st.subtree_size));
    }
}

}  // namespace tree_detail

template <class Ctx, class Factory, class OnComplete>
void tree_on_wakeup(Ctx& ctx, TreeState& st, const Factory& factory, OnComplete&& on_leader) {
    if (ctx.self() != 0) return;
    st.adopted = true;
    st.parent_port = -1;
    st.pending_replies = ctx.degree();
    for (int p = 0; p < ctx.degree(); ++p) ctx.send(p, factory.probe());
    tree_detail::check_complete(ctx, st, factory, on_leader);
}

/// Returns true when the message was a tree-bootstrap message and consumed.
template <class Ctx, class Factory, class OnComplete>
bool tree_on_message(Ctx& ctx, TreeState& st, TreeMsg kind, std::uint64_t done_count,
                     int from_port, const Factory& factory, OnComplete&& on_leader) {
    switch (kind) {
        case TreeMsg::probe:
            if (!st.adopted) {
                st.adopted = true;
                st.parent_port = from_port;
                ctx.send(from_port, factory.accept());
                st.pending_replies = ctx.degree() - 1;
                for (int p = 0; p < ctx.degree(); ++p)
                    if (p != from_port) ctx.send(p, factory.probe());
                tree_detail::check_complete(ctx, st, factory, on_leader);
            } else {
                ctx.send(from_port, factory.reject());
            }
            return true;
        case TreeMsg::accept:
            st.child_ports.push_back(from_port);
            --st.pending_replies;
            ++st.pending_done;
            tree_detail::check_complete(ctx, st, factory, on_leader);
            return true;
        case TreeMsg::reject:
            --st.pending_replies;
            tree_detail::check_complete(ctx, st, factory, on_leader);
            return true;
        case TreeMsg::done:
            st.subtree_size += done_count;
            --st.pending_done;
            tree_detail::check_complete(ctx, st, factory, on_leader);
            return true;
    }
    return false;
}

/// Builds the overlay from per-node bootstrap states after a run.
template <class GetTreeState, class Nodes>
SpanningTree extract_tree(const GeoNetwork& net, const Nodes& nodes, GetTreeState get) {
    const std::size_t n = net.size();
    SpanningTree tree;
    tree.leader = 0;
    tree.parent.resize(n);
    tree.children.assign(n, {});
    for (NodeId u = 0; u < n; ++u) {
        const TreeState& st = get(nodes[u]);
        if (u == 0) {
            tree.parent[u] = u;
            continue;
        }
        if (!st.adopted || st.parent_port < 0)
            throw NetworkError("extract_tree: node never adopted a parent");
        const NodeId p = net.neighbors(u)[static_cast<std::size_t>(st.parent_port)];
        tree.parent[u] = p;
        tree.children[p].push_back(u);
    }
    for (auto& kids : tree.children) std::sort(kids.begin(), kids.end());
    compute_tree_diameter(tree);
    return tree;
}

// ---------------------------------------------------------------------------
// Standalone bootstrap protocol (phase "spanning_tree").

struct SpanningTreeProtocol {
    struct Message {
        TreeMsg kind = TreeMsg::probe;
        std::uint64_t count = 0;
    };
    struct Node {
        TreeState tree;
    };

    struct Factory {
        static Message probe() { return {TreeMsg::probe, 0}; }
        static Message accept() { return {TreeMsg::accept, 0}; }
        static Message reject() { return {TreeMsg::reject, 0}; }
        static Message done(std::uint64_t count) { return {TreeMsg::done, count}; }
    };

    explicit SpanningTreeProtocol(const GeoNetwork& net)
        : schema_(BitSchema::make(net.size(), net.grid_side(), 4)) {}

    Node make_node(const NodeInit&) { return {}; }

    template <class Ctx>
    void on_wakeup(Ctx& ctx, Node& node) {
        tree_on_wakeup(ctx, node.tree, Factory{}, [] {});
    }
    template <class Ctx>
    void on_receive(Ctx& ctx, Node& node, int from_port, const Message& msg) {
        tree_on_message(ctx, node.tree, msg.kind, msg.count, from_port, Factory{}, [] {});
    }

    std::uint32_t bit_size(const Message& msg) const {
        return schema_.tag_bits + (msg.kind == TreeMsg::done ? schema_.counter_bits : 0);
    }
    static std::string_view kind_name(const Message& msg) {
        switch (msg.kind) {
            case TreeMsg::probe: return "probe";
            case TreeMsg::accept: return "accept";
            case TreeMsg::reject: return "reject";
            case TreeMsg::done: return "done";
        }
        return "?";
    }
    static std::string_view phase_of(const Message&) { return "spanning_tree"; }

private:
    BitSchema schema_;
};

struct SpanningTreeRun {
    SpanningTree tree;
    Ledger ledger;
    std::vector<TraceEvent> trace;
};

/// Asynchronous O(m)-message bootstrap; node 0 is the leader.
inline SpanningTreeRun build_spanning_tree(const GeoNetwork& net, const SchedulerPolicy& policy,
                                           std::uint64_t seed) {
    auto res = run_protocol(net, SpanningTreeProtocol(net), policy, seed);
    SpanningTreeRun out;
    out.tree = extract_tree(net, res.nodes,
                            [](const SpanningTreeProtocol::Node& n) -> const TreeState& {
                                return n.tree;
                            });
    out.ledger = std::move(res.ledger);
    out.trace = std::move(res.trace);
    return out;
}

// ---------------------------------------------------------------------------
// Reusable fragments over a prebuilt tree: a point broadcast and a
// counter convergecast. The composite geometry protocols embed the same
// downward-relay / fold-upward machinery with their own payloads.

namespace fragment_detail {

struct Prewired {
    int parent_port = -1;
    std::vector<int> child_ports;
};

inline Prewired prewire(const GeoNetwork& net, const SpanningTree& tree, NodeId id) {
    Prewired w;
    if (id != tree.leader) w.parent_port = net.port_of(id, tree.parent[id]);
    for (const NodeId c : tree.children[id]) w.child_ports.push_back(net.port_of(id, c));
    return w;
}

}  // namespace fragment_detail

/// Leader pushes one grid point down the tree: n-1 messages.
class BroadcastPointProtocol {
public:
    struct Message {
        GridPoint payload{};
    };
    struct Node {
        fragment_detail::Prewired wire;
        std::optional<GridPoint> received;
    };

    BroadcastPointProtocol(const GeoNetwork& net, const SpanningTree& tree, GridPoint payload)
        : net_(&net),
          tree_(&tree),
          payload_(payload),
          schema_(BitSchema::make(net.size(), net.grid_side(), 1)) {}

    Node make_node(const NodeInit& init) {
        return Node{fragment_detail::prewire(*net_, *tree_, init.id), std::nullopt};
    }

    template <class Ctx>
    void on_wakeup(Ctx& ctx, Node& node) {
        if (ctx.self() != tree_->leader) return;
        node.received = payload_;
        for (const int p : node.wire.child_ports) ctx.send(p, Message{payload_});
    }
    template <class Ctx>
    void on_receive(Ctx& ctx, Node& node, int, const Message& msg) {
        node.received = msg.payload;
        for (const int p : node.wire.child_ports) ctx.send(p, msg);
    }

    std::uint32_t bit_size(const Message&) const {
        return schema_.tag_bits + schema_.point_bits;
    }
    static std::string_view kind_name(const Message&) { return "item"; }
    static std::string_view phase_of(const Message&) { return "broadcast"; }

private:
    const GeoNetwork* net_;
    const SpanningTree* tree_;
    GridPoint payload_;
    BitSchema schema_;
};

/// Leaves push counters up; internal nodes fold (sum) children plus their own
/// value; the leader's value is the total.
class ConvergecastSumProtocol {
public:
    struct Message {
        std::uint64_t value = 0;
    };
    struct Node {
        fragment_detail::Prewired wire;
        std::uint64_t value = 1;
        std::size_t pending = 0;
        bool forwarded = false;
    };

    ConvergecastSumProtocol(const GeoNetwork& net, const SpanningTree& tree)
        : net_(&net),
          tree_(&tree),
          schema_(BitSchema::make(net.size(), net.grid_side(), 1)) {}

    Node make_node(const NodeInit& init) {
        Node n;
        n.wire = fragment_detail::prewire(*net_, *tree_, init.id);
        n.pending = n.wire.child_ports.size();
        return n;
    }

    template <class Ctx>
    void on_wakeup(Ctx& ctx, Node& node) {
        maybe_forward(ctx, node);
    }
    template <class Ctx>
    void on_receive(Ctx& ctx, Node& node, int, const Message& msg) {
        node.value += msg.value;
        --node.pending;
        maybe_forward(ctx, node);
    }

    std::uint32_t bit_size(const Message&) const {
        return schema_.tag_bits + schema_.counter_bits;
    }
    static std::string_view kind_name(const Message&) { return "fold"; }
    static std::string_view phase_of(const Message&) { return "convergecast"; }

private:
    template <class Ctx>
    void maybe_forward(Ctx& ctx, Node& node) {
        if (node.pending != 0 || ctx.self() == tree_->leader) return;
        if (node.forwarded) return;
        node.forwarded = true;
        ctx.send(node.wire.parent_port, Message{node.value});
    }

    const GeoNetwork* net_;
    const SpanningTree* tree_;
    BitSchema schema_;
};

}  // namespace geonet
