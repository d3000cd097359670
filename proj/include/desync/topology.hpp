#pragma once

#include <string>
#include <utility>
#include <vector>

namespace desync {

// Undirected connectivity graph. Node ids are dense in [0, node_count).
struct Topology {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges; // unique, first < second, sorted

    // Adjacency lists, sorted by id.
    std::vector<std::vector<int>> adjacency() const;
};

Topology make_star(int n);     // node 0 is the center, n >= 2
Topology make_chain(int n);    // path 0-1-...-(n-1), n >= 2
Topology make_cycle(int n);    // chain plus edge (0, n-1), n >= 3
Topology make_dumbbell(int n); // relays 0,1 joined; (n-2)/2 leaves each; n even, >= 6
Topology make_complete(int n); // single-hop clique, n >= 1

// Parse an edge-list text: one "a b" pair per line, '#' comments ignored,
// duplicates collapsed. Ids must be dense from 0, no self-loops.
Topology load_topology(const std::string& text);
Topology load_topology_file(const std::string& path);

// Representative 10-node mesh whose two-hop coloring optimum is 6 slots.
// Also shipped as data/mesh10.txt for the edge-list interface.
Topology mesh10();

// Parse a topology spec string: "star:6", "chain:10", "cycle:4",
// "dumbbell:20", "complete:8", "mesh10", or "file:PATH".
Topology make_topology(const std::string& spec);

// map[i] = sorted ids at graph distance 1 or 2 from i (excluding i).
using InterferenceMap = std::vector<std::vector<int>>;
InterferenceMap two_hop(const Topology& t);

// Minimum number of slots = chromatic number of the two-hop graph.
struct SlotsResult {
    int slots = 0;
    bool exact = false; // false above kExactColoringLimit (greedy upper bound)
};

inline constexpr int kExactColoringLimit = 25;

// Exact branch-and-bound (clique lower bound, DSATUR upper bound) up to
// kExactColoringLimit nodes; greedy bound with exact=false beyond that.
SlotsResult min_slots(const Topology& t);

// Size of the largest clique of the two-hop graph (exact, small graphs only).
int two_hop_max_clique(const Topology& t);

} // namespace desync
