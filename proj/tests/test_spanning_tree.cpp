#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geonet/tree.hpp"

using namespace geonet;

TEST_CASE("path network bootstraps to the path itself") {
    const auto net = make_path(5, 2.0, Knowledge::KT1, 7);
    const auto run = build_spanning_tree(net, SchedulerPolicy::restricted(), 1);
    CHECK(run.tree.leader == 0);
    CHECK(run.tree.tree_diameter == 4);
    for (NodeId u = 1; u < 5; ++u) CHECK(run.tree.parent[u] == u - 1);
    std::string why;
    CHECK(validate_tree(net, run.tree, &why));
}

TEST_CASE("K4 under the restricted scheduler becomes a star at node 0") {
    const auto net = make_complete(4, 2.0, Knowledge::KT1, 8);
    const auto run = build_spanning_tree(net, SchedulerPolicy::restricted(), 1);
    CHECK(run.tree.tree_diameter == 2);
    for (NodeId u = 1; u < 4; ++u) CHECK(run.tree.parent[u] == 0);
    CHECK(run.tree.children[0].size() == 3);
}

TEST_CASE("bootstrap cost stays within 4m + 4n messages") {
    std::mt19937_64 rng(15);
    for (int iter = 0; iter < 30; ++iter) {
        const std::size_t n = 5 + rng() % 80;
        const auto net = make_random_connected(n, 0.15, 2.0, Knowledge::KT1, rng());
        const auto run = build_spanning_tree(net, SchedulerPolicy::random_delay(9, rng()), 3);
        const auto& ph = run.ledger.phase("spanning_tree");
        CHECK(ph.messages == run.ledger.total_messages);
        CHECK(ph.messages <= 4 * net.edge_count() + 4 * net.size());
        std::string why;
        CHECK(validate_tree(net, run.tree, &why));
    }
}

TEST_CASE("tree validity holds across topologies and scheduler policies") {
    std::mt19937_64 rng(16);
    auto hook = [](const AdversarialView& view) -> std::uint64_t {
        return 1 + (view.dst * 5 + view.bits) % 11;
    };
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t n = 2 + rng() % 199;
        const auto net = make_random_connected(n, 0.08, 2.0, Knowledge::KT1, rng());
        SchedulerPolicy policy;
        switch (iter % 3) {
            case 0: policy = SchedulerPolicy::restricted(); break;
            case 1: policy = SchedulerPolicy::random_delay(1 + rng() % 16, rng()); break;
            default: policy = SchedulerPolicy::adversarial(hook); break;
        }
        const auto run = build_spanning_tree(net, policy, rng());
        std::string why;
        INFO("n=" << n << " iter=" << iter << " why=" << why);
        CHECK(validate_tree(net, run.tree, &why));
        CHECK(run.tree.tree_diameter >= 1);
    }
}

TEST_CASE("single node network is a trivial tree") {
    GeoNetwork net({{1, 1}}, {}, 2.0, Knowledge::KT1);
    const auto run = build_spanning_tree(net, SchedulerPolicy::restricted(), 1);
    CHECK(run.tree.tree_diameter == 0);
    CHECK(run.tree.parent[0] == 0);
    CHECK(run.ledger.total_messages == 0);
}

TEST_CASE("broadcast of one point on a 5-node path costs 4 messages") {
    const auto net = make_path(5, 2.0, Knowledge::KT1, 9);
    const auto st = build_spanning_tree(net, SchedulerPolicy::restricted(), 1);
    const GridPoint payload{11, 13};
    const auto res =
        run_protocol(net, BroadcastPointProtocol(net, st.tree, payload),
                     SchedulerPolicy::restricted(), 1);
    CHECK(res.ledger.total_messages == 4);
    for (const auto& node : res.nodes) {
        REQUIRE(node.received.has_value());
        CHECK(*node.received == payload);
    }
}

TEST_CASE("convergecast sum delivers n to the leader on any tree") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 10; ++iter) {
        const std::size_t n = 3 + rng() % 60;
        const auto net = make_random_connected(n, 0.2, 2.0, Knowledge::KT1, rng());
        const auto st = build_spanning_tree(net, SchedulerPolicy::random_delay(5, rng()), 2);
        const auto res = run_protocol(net, ConvergecastSumProtocol(net, st.tree),
                                      SchedulerPolicy::random_delay(7, rng()), 3);
        CHECK(res.nodes[0].value == n);
        CHECK(res.ledger.total_messages == n - 1);
    }
}
