#pragma once

// Test-only oracles, kept independent of the library implementations they
// cross-check.

#include <optional>
#include <queue>
#include <vector>

#include "desync/topology.hpp"

namespace testsupport {

// All-pairs BFS distances; -1 when unreachable.
inline std::vector<std::vector<int>> bfs_distances(const desync::Topology& t) {
    auto adj = t.adjacency();
    std::vector<std::vector<int>> dist(t.node_count,
                                       std::vector<int>(t.node_count, -1));
    for (int s = 0; s < t.node_count; ++s) {
        std::queue<int> q;
        dist[s][s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u])
                if (dist[s][v] < 0) {
                    dist[s][v] = dist[s][u] + 1;
                    q.push(v);
                }
        }
    }
    return dist;
}

// Plain backtracking k-colorability over the given adjacency, fixed vertex
// order, no bounding tricks.
inline bool brute_k_colorable(const std::vector<std::vector<int>>& adj, int k,
                              std::vector<int>& color, int v) {
    int n = static_cast<int>(adj.size());
    if (v == n) return true;
    for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (int u : adj[v])
            if (u >= 0 && u < v && color[u] == c) {
                ok = false;
                break;
            }
        if (!ok) continue;
        color[v] = c;
        if (brute_k_colorable(adj, k, color, v + 1)) return true;
    }
    color[v] = -1;
    return false;
}

// Exhaustive chromatic number of the two-hop graph. Only for small graphs.
inline int brute_two_hop_chromatic(const desync::Topology& t) {
    auto map = desync::two_hop(t);
    for (int k = 1; k <= t.node_count; ++k) {
        std::vector<int> color(t.node_count, -1);
        if (brute_k_colorable(map, k, color, 0)) return k;
    }
    return t.node_count;
}

} // namespace testsupport
