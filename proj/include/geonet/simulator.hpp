#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "geonet/ledger.hpp"
#include "geonet/network.hpp"

namespace geonet {

/// View handed to an adversarial delay hook: the delivered trace so far plus
/// the message being scheduled. The hook never sees future randomness.
struct AdversarialView {
    const std::vector<TraceEvent>& delivered;
    NodeId src;
    NodeId dst;
    std::string_view kind;
    std::uint32_t bits;
    std::uint64_t send_step;
};

using DelayHook = std::function<std::uint64_t(const AdversarialView&)>;

/// Delivery discipline. All variants preserve per-link FIFO and deliver every
/// sent message (the run loop drains the queue).
///  - restricted_fifo: among pending deliveries, lowest sender id first,
///    then lowest receiver, then send order.
///  - random_delay: integer delay in [1, max_delay] from a seeded generator.
///  - adversarial: delay from a hook of the trace prefix.
struct SchedulerPolicy {
    enum class Kind : std::uint8_t { restricted_fifo, random_delay, adversarial };

    Kind kind = Kind::restricted_fifo;
    std::uint64_t max_delay = 16;
    std::optional<std::uint64_t> seed;  // random_delay; defaults to the run seed
    DelayHook hook;

    static SchedulerPolicy restricted() { return {}; }
    static SchedulerPolicy random_delay(std::uint64_t max_delay,
                                        std::optional<std::uint64_t> seed = std::nullopt) {
        SchedulerPolicy p;
        p.kind = Kind::random_delay;
        p.max_delay = max_delay == 0 ? 1 : max_delay;
        p.seed = seed;
        return p;
    }
    static SchedulerPolicy adversarial(DelayHook hook) {
        SchedulerPolicy p;
        p.kind = Kind::adversarial;
        p.hook = std::move(hook);
        return p;
    }
};

struct RunLimits {
    std::uint64_t max_events = 1000000000;  // livelock cap
    bool keep_trace = true;
};

/// Static node facts available at initialization. Neighbor ids are populated
/// only under KT1; KT0 nodes address neighbors by port alone.
struct NodeInit {
    NodeId id = 0;
    GridPoint position{};
    int degree = 0;
    std::uint64_t n = 0;
    std::int64_t grid_side = 1;
    double grid_exponent = 2.0;
    Knowledge knowledge = Knowledge::KT1;
    std::span<const NodeId> neighbor_ids;
};

template <class P>
struct RunResult {
    std::vector<typename P::Node> nodes;
    Ledger ledger;
    std::vector<TraceEvent> trace;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministic event-driven run: wakes every node (in id order), then
/// delivers messages per the policy until quiescence. Identical
/// (network, protocol, policy, seed) inputs give bit-identical ledger, trace
/// and final states.
///
/// Causal-depth convention: all messages sent inside one handler are
/// depth-equal siblings (depth of the triggering delivery plus one); wake-up
/// sends carry depth 0. Reported time is the longest delivery chain.
template <class P>
class Simulation {
public:
    using Message = typename P::Message;
    using Node = typename P::Node;

    class Context {
    public:
        Context(Simulation& sim, NodeId self) : sim_(sim), self_(self) {}

        NodeId self() const { return self_; }
        int degree() const { return sim_.net_.degree(self_); }

        void send(int port, const Message& msg) { sim_.enqueue(self_, port, msg); }
        void send_all(const Message& msg) {
            for (int p = 0; p < degree(); ++p) send(p, msg);
        }

        /// Node-private randomness, derived from the run seed.
        std::mt19937_64& rng() { return sim_.node_rng(self_); }

    private:
        Simulation& sim_;
        NodeId self_;
    };

    Simulation(const GeoNetwork& net, P proto, SchedulerPolicy policy, std::uint64_t seed,
               RunLimits limits = {})
        : net_(net),
          proto_(std::move(proto)),
          policy_(std::move(policy)),
          seed_(seed),
          limits_(limits),
          delay_rng_(policy_.seed.value_or(detail::splitmix64(seed ^ 0x5bd1e995u))) {}

    RunResult<P> run() {
        const std::size_t n = net_.size();
        nodes_.clear();
        nodes_.reserve(n);
        for (NodeId id = 0; id < n; ++id) {
            NodeInit init;
            init.id = id;
            init.position = net_.positions()[id];
            init.degree = net_.degree(id);
            init.n = n;
            init.grid_side = net_.grid_side();
            init.grid_exponent = net_.grid_exponent();
            init.knowledge = net_.knowledge();
            if (net_.knowledge() == Knowledge::KT1)
                init.neighbor_ids = std::span<const NodeId>(net_.neighbors(id));
            nodes_.push_back(proto_.make_node(init));
        }

        // Simultaneous wake-up; messages sent here carry causal depth 0.
        current_depth_ = -1;
        for (NodeId id = 0; id < n; ++id) {
            Context ctx(*this, id);
            proto_.on_wakeup(ctx, nodes_[id]);
        }

        while (!queue_.empty()) {
            if (delivered_ >= limits_.max_events)
                throw LivelockError("simulation exceeded the event cap without quiescence");
            Pending ev = queue_.top();
            queue_.pop();

            TraceEvent rec;
            rec.index = delivered_;
            rec.src = ev.src;
            rec.dst = ev.dst;
            rec.kind = P::kind_name(ev.msg);
            rec.bits = ev.bits;
            rec.causal_depth = ev.depth;
            rec.phase = P::phase_of(ev.msg);
            ledger_.record(rec);
            if (limits_.keep_trace) trace_.push_back(rec);
            ++delivered_;

            current_depth_ = static_cast<std::int64_t>(ev.depth);
            Context ctx(*this, ev.dst);
            proto_.on_receive(ctx, nodes_[ev.dst], net_.port_of(ev.dst, ev.src), ev.msg);
        }

        if (sent_ != delivered_) throw Error("internal: sent/delivered mismatch");

        return RunResult<P>{std::move(nodes_), std::move(ledger_), std::move(trace_)};
    }

private:
    struct Pending {
        std::uint64_t k1, k2, k3;
        NodeId src, dst;
        std::uint32_t bits;
        std::uint64_t depth;
        Message msg;

        bool operator>(const Pending& o) const {
            if (k1 != o.k1) return k1 > o.k1;
            if (k2 != o.k2) return k2 > o.k2;
            return k3 > o.k3;
        }
    };

    void enqueue(NodeId src, int port, const Message& msg) {
        if (port < 0 || port >= net_.degree(src))
            throw NetworkError("send: port out of range");
        const NodeId dst = net_.neighbors(src)[static_cast<std::size_t>(port)];
        const std::uint32_t bits = proto_.bit_size(msg);
        if (bits > net_.budget_bits())
            throw BudgetError(std::string(P::kind_name(msg)),
                              "message kind '" + std::string(P::kind_name(msg)) + "' needs " +
                                  std::to_string(bits) + " bits, budget is " +
                                  std::to_string(net_.budget_bits()));

        Pending ev;
        ev.src = src;
        ev.dst = dst;
        ev.bits = bits;
        ev.depth = current_depth_ < 0 ? 0 : static_cast<std::uint64_t>(current_depth_) + 1;
        ev.msg = msg;
        const std::uint64_t seq = sent_++;
        switch (policy_.kind) {
            case SchedulerPolicy::Kind::restricted_fifo:
                ev.k1 = src;
                ev.k2 = dst;
                ev.k3 = seq;
                break;
            case SchedulerPolicy::Kind::random_delay: {
                const std::uint64_t delay = 1 + delay_rng_() % policy_.max_delay;
                ev.k1 = clamp_fifo(src, dst, delivered_ + delay);
                ev.k2 = seq;
                ev.k3 = 0;
                break;
            }
            case SchedulerPolicy::Kind::adversarial: {
                AdversarialView view{trace_, src, dst, P::kind_name(msg), bits, delivered_};
                const std::uint64_t delay = std::max<std::uint64_t>(1, policy_.hook(view));
                ev.k1 = clamp_fifo(src, dst, delivered_ + delay);
                ev.k2 = seq;
                ev.k3 = 0;
                break;
            }
        }
        queue_.push(std::move(ev));
    }

    // Per-link FIFO: delivery keys on a directed link never decrease.
    std::uint64_t clamp_fifo(NodeId src, NodeId dst, std::uint64_t at) {
        auto& last = last_link_key_[(static_cast<std::uint64_t>(src) << 32) | dst];
        at = std::max(at, last);
        last = at;
        return at;
    }

    std::mt19937_64& node_rng(NodeId id) {
        if (node_rngs_.empty()) node_rngs_.resize(net_.size());
        auto& slot = node_rngs_[id];
        if (!slot) slot.emplace(detail::splitmix64(seed_ + 0x1000 + id));
        return *slot;
    }

    const GeoNetwork& net_;
    P proto_;
    SchedulerPolicy policy_;
    std::uint64_t seed_;
    RunLimits limits_;
    std::mt19937_64 delay_rng_;

    std::vector<Node> nodes_;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
    std::map<std::uint64_t, std::uint64_t> last_link_key_;
    std::vector<std::optional<std::mt19937_64>> node_rngs_;
    Ledger ledger_;
    std::vector<TraceEvent> trace_;
    std::uint64_t sent_ = 0;
    std::uint64_t delivered_ = 0;
    std::int64_t current_depth_ = -1;
};

template <class P>
RunResult<P> run_protocol(const GeoNetwork& net, P proto, const SchedulerPolicy& policy,
                          std::uint64_t seed, const RunLimits& limits = {}) {
    Simulation<P> sim(net, std::move(proto), policy, seed, limits);
    return sim.run();
}

}  // namespace geonet
