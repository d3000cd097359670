#include <doctest.h>

#include <algorithm>
#include <set>

#include "desync/topology.hpp"
#include "support.hpp"

using namespace desync;

TEST_CASE("star generator") {
    Topology t = make_star(6);
    CHECK(t.node_count == 6);
    CHECK(t.edges.size() == 5);
    for (auto [a, b] : t.edges) CHECK(a == 0);

    Topology t2 = make_star(2);
    REQUIRE(t2.edges.size() == 1);
    CHECK(t2.edges[0] == std::pair{0, 1});

    CHECK_THROWS_AS(make_star(1), std::invalid_argument);
}

TEST_CASE("star-20 leaves see 19 two-hop neighbors") {
    // BFS oracle: every leaf reaches all other nodes within two hops.
    Topology t = make_star(20);
    auto dist = testsupport::bfs_distances(t);
    auto map = two_hop(t);
    for (int leaf = 1; leaf < 20; ++leaf) {
        CHECK(map[leaf].size() == 19);
        for (int other = 0; other < 20; ++other)
            if (other != leaf) CHECK(dist[leaf][other] <= 2);
    }
}

TEST_CASE("chain, cycle, dumbbell generators") {
    Topology chain = make_chain(4);
    CHECK(chain.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});

    Topology cyc = make_cycle(10);
    auto adj = cyc.adjacency();
    for (int i = 0; i < 10; ++i) CHECK(adj[i].size() == 2);
    CHECK(cyc.edges.size() == 10);

    Topology db = make_dumbbell(6);
    auto dadj = db.adjacency();
    CHECK(dadj[0] == std::vector<int>{1, 2, 3});
    CHECK(dadj[1] == std::vector<int>{0, 4, 5});

    CHECK_THROWS_AS(make_chain(1), std::invalid_argument);
    CHECK_THROWS_AS(make_cycle(2), std::invalid_argument);
    CHECK_THROWS_AS(make_dumbbell(5), std::invalid_argument);
    CHECK_THROWS_AS(make_dumbbell(4), std::invalid_argument);
}

TEST_CASE("edge list parsing") {
    Topology t = load_topology("0 1\n1 2");
    CHECK(t.node_count == 3);
    CHECK(t.edges.size() == 2);

    Topology dup = load_topology("0 1\n0 1");
    CHECK(dup.edges.size() == 1);

    Topology comments = load_topology("# chain\n0 1\n\n1 2   # tail\n");
    CHECK(comments.node_count == 3);

    CHECK_THROWS_AS(load_topology("0 0"), std::invalid_argument);      // self-loop
    CHECK_THROWS_AS(load_topology("0 2"), std::invalid_argument);      // non-dense ids
    CHECK_THROWS_AS(load_topology("0 x"), std::invalid_argument);      // parse error
    CHECK_THROWS_AS(load_topology("0 1 2"), std::invalid_argument);    // trailing token
    CHECK_THROWS_AS(load_topology("# none\n"), std::invalid_argument); // no edges
}

TEST_CASE("two_hop distances on chain4") {
    Topology t = make_chain(4);
    auto map = two_hop(t);
    CHECK(map[0] == std::vector<int>{1, 2});
    // ends of the chain are three hops apart
    CHECK(!std::binary_search(map[0].begin(), map[0].end(), 3));
    CHECK(!std::binary_search(map[3].begin(), map[3].end(), 0));
}

TEST_CASE("two_hop on star6 is complete") {
    auto map = two_hop(make_star(6));
    for (int i = 0; i < 6; ++i) CHECK(map[i].size() == 5);
}

TEST_CASE("min_slots oracle checkpoints") {
    CHECK(min_slots(make_dumbbell(6)).slots == 4);
    CHECK(min_slots(make_dumbbell(20)).slots == 11);
    CHECK(min_slots(make_cycle(10)).slots == 4);
    CHECK(min_slots(make_star(6)).slots == 6);
    CHECK(min_slots(make_star(20)).slots == 20);
    CHECK(min_slots(make_chain(10)).slots == 3);
    for (int n : {3, 5, 9, 12})
        CHECK(min_slots(make_chain(n)).slots <= 3);
}

TEST_CASE("min_slots exactness flag and greedy fallback") {
    auto exact = min_slots(make_star(25));
    CHECK(exact.exact);
    CHECK(exact.slots == 25);
    auto greedy = min_slots(make_star(30));
    CHECK(!greedy.exact);
    CHECK(greedy.slots == 30); // greedy is exact on complete two-hop graphs
}

TEST_CASE("min_slots matches exhaustive coloring on small topologies") {
    std::vector<Topology> cases = {make_chain(4),   make_chain(10), make_cycle(4),
                                   make_cycle(10),  make_star(6),   make_dumbbell(6),
                                   make_complete(5), mesh10()};
    for (const auto& t : cases) {
        CAPTURE(t.node_count);
        CHECK(min_slots(t).slots == testsupport::brute_two_hop_chromatic(t));
    }
}

TEST_CASE("shipped mesh10 needs exactly six slots") {
    Topology t = mesh10();
    CHECK(t.node_count == 10);
    auto result = min_slots(t);
    CHECK(result.exact);
    CHECK(result.slots == 6);

    Topology from_file = load_topology_file(DESYNC_SOURCE_DIR "/data/mesh10.txt");
    CHECK(from_file.node_count == t.node_count);
    CHECK(from_file.edges == t.edges);
}

TEST_CASE("topology spec strings") {
    CHECK(make_topology("star:6").node_count == 6);
    CHECK(make_topology("complete:8").edges.size() == 28);
    CHECK(make_topology("mesh10").node_count == 10);
    CHECK_THROWS_AS(make_topology("blob:4"), std::invalid_argument);
    CHECK_THROWS_AS(make_topology("star"), std::invalid_argument);
}
