#include "desync/topology.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace desync {

namespace {

void add_edge(std::set<std::pair<int, int>>& edges, int a, int b) {
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
}

Topology from_edge_set(int n, const std::set<std::pair<int, int>>& edges) {
    Topology t;
    t.node_count = n;
    t.edges.assign(edges.begin(), edges.end());
    return t;
}

} // namespace

std::vector<std::vector<int>> Topology::adjacency() const {
    std::vector<std::vector<int>> adj(node_count);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

Topology make_star(int n) {
    if (n < 2) throw std::invalid_argument("star topology needs at least 2 nodes");
    std::set<std::pair<int, int>> edges;
    for (int k = 1; k < n; ++k) add_edge(edges, 0, k);
    return from_edge_set(n, edges);
}

Topology make_chain(int n) {
    if (n < 2) throw std::invalid_argument("chain topology needs at least 2 nodes");
    std::set<std::pair<int, int>> edges;
    for (int k = 0; k + 1 < n; ++k) add_edge(edges, k, k + 1);
    return from_edge_set(n, edges);
}

Topology make_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle topology needs at least 3 nodes");
    Topology t = make_chain(n);
    std::set<std::pair<int, int>> edges(t.edges.begin(), t.edges.end());
    add_edge(edges, 0, n - 1);
    return from_edge_set(n, edges);
}

Topology make_dumbbell(int n) {
    if (n < 6 || n % 2 != 0)
        throw std::invalid_argument("dumbbell topology needs an even node count >= 6");
    std::set<std::pair<int, int>> edges;
    add_edge(edges, 0, 1);
    int per_relay = (n - 2) / 2;
    for (int k = 0; k < per_relay; ++k) {
        add_edge(edges, 0, 2 + k);
        add_edge(edges, 1, 2 + per_relay + k);
    }
    return from_edge_set(n, edges);
}

Topology make_complete(int n) {
    if (n < 1) throw std::invalid_argument("complete topology needs at least 1 node");
    std::set<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) add_edge(edges, a, b);
    return from_edge_set(n, edges);
}

Topology load_topology(const std::string& text) {
    std::set<std::pair<int, int>> edges;
    std::set<int> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long a, b;
        if (!(ls >> a)) continue; // blank or comment-only line
        if (!(ls >> b))
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": expected two node ids");
        std::string extra;
        if (ls >> extra)
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": trailing tokens");
        if (a < 0 || b < 0)
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": negative node id");
        if (a == b)
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": self-loop on node " + std::to_string(a));
        add_edge(edges, static_cast<int>(a), static_cast<int>(b));
        seen.insert(static_cast<int>(a));
        seen.insert(static_cast<int>(b));
    }
    if (edges.empty()) throw std::invalid_argument("edge list contains no edges");
    int max_id = *seen.rbegin();
    if (static_cast<int>(seen.size()) != max_id + 1)
        throw std::invalid_argument("node ids are not dense from 0");
    return from_edge_set(max_id + 1, edges);
}

Topology load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_topology(buf.str());
}

Topology mesh10() {
    // Matches data/mesh10.txt; two-hop coloring optimum is 6 slots.
    return load_topology("0 1\n0 5\n0 6\n1 2\n1 8\n2 3\n2 5\n2 7\n3 9\n4 5\n"
                         "4 6\n4 8\n5 8\n5 9\n6 9\n7 9\n");
}

Topology make_topology(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto size_arg = [&]() {
        if (arg.empty()) throw std::invalid_argument("topology spec '" + spec + "' needs a size");
        return std::stoi(arg);
    };
    if (kind == "star") return make_star(size_arg());
    if (kind == "chain") return make_chain(size_arg());
    if (kind == "cycle") return make_cycle(size_arg());
    if (kind == "dumbbell") return make_dumbbell(size_arg());
    if (kind == "complete" || kind == "single-hop") return make_complete(size_arg());
    if (kind == "mesh10") return mesh10();
    if (kind == "file") return load_topology_file(arg);
    throw std::invalid_argument("unknown topology spec: " + spec);
}

InterferenceMap two_hop(const Topology& t) {
    auto adj = t.adjacency();
    InterferenceMap map(t.node_count);
    for (int i = 0; i < t.node_count; ++i) {
        std::set<int> near;
        for (int j : adj[i]) {
            near.insert(j);
            for (int k : adj[j]) near.insert(k);
        }
        near.erase(i);
        map[i].assign(near.begin(), near.end());
    }
    return map;
}

namespace {

using Mask = std::uint64_t;

std::vector<Mask> interference_masks(const Topology& t) {
    auto map = two_hop(t);
    std::vector<Mask> masks(t.node_count, 0);
    for (int i = 0; i < t.node_count; ++i)
        for (int j : map[i]) masks[i] |= Mask{1} << j;
    return masks;
}

// Exact max clique, simple branch and bound over candidate masks.
void max_clique_impl(const std::vector<Mask>& adj, Mask candidates, int current, int& best) {
    if (candidates == 0) {
        best = std::max(best, current);
        return;
    }
    while (candidates) {
        if (current + __builtin_popcountll(candidates) <= best) return;
        int v = __builtin_ctzll(candidates);
        candidates &= ~(Mask{1} << v);
        max_clique_impl(adj, candidates & adj[v], current + 1, best);
    }
}

int max_clique(const std::vector<Mask>& adj) {
    int n = static_cast<int>(adj.size());
    int best = 0;
    Mask all = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
    max_clique_impl(adj, all, 0, best);
    return best;
}

// DSATUR greedy coloring; returns the number of colors used.
int dsatur_greedy(const std::vector<Mask>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<int> color(n, -1);
    std::vector<Mask> neighbor_colors(n, 0); // bitset of colors used next door
    int used = 0;
    for (int step = 0; step < n; ++step) {
        int pick = -1, pick_sat = -1, pick_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (color[v] >= 0) continue;
            int sat = __builtin_popcountll(neighbor_colors[v]);
            int deg = __builtin_popcountll(adj[v]);
            if (sat > pick_sat || (sat == pick_sat && deg > pick_deg)) {
                pick = v;
                pick_sat = sat;
                pick_deg = deg;
            }
        }
        int c = __builtin_ctzll(~neighbor_colors[pick]);
        color[pick] = c;
        used = std::max(used, c + 1);
        Mask nb = adj[pick];
        while (nb) {
            int u = __builtin_ctzll(nb);
            nb &= nb - 1;
            neighbor_colors[u] |= Mask{1} << c;
        }
    }
    return used;
}

struct KColorSearch {
    const std::vector<Mask>& adj;
    int n;
    int k;
    std::vector<int> color;
    std::vector<Mask> neighbor_colors;

    explicit KColorSearch(const std::vector<Mask>& a, int colors)
        : adj(a), n(static_cast<int>(a.size())), k(colors), color(n, -1), neighbor_colors(n, 0) {}

    bool solve(int assigned, int max_used) {
        if (assigned == n) return true;
        // DSATUR order: most saturated uncolored vertex, ties by degree.
        int pick = -1, pick_sat = -1, pick_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (color[v] >= 0) continue;
            int sat = __builtin_popcountll(neighbor_colors[v]);
            int deg = __builtin_popcountll(adj[v]);
            if (sat > pick_sat || (sat == pick_sat && deg > pick_deg)) {
                pick = v;
                pick_sat = sat;
                pick_deg = deg;
            }
        }
        // Symmetry breaking: a fresh color index may exceed max_used by one only.
        int limit = std::min(k - 1, max_used + 1);
        for (int c = 0; c <= limit; ++c) {
            if (neighbor_colors[pick] & (Mask{1} << c)) continue;
            color[pick] = c;
            std::vector<int> touched;
            Mask nb = adj[pick];
            while (nb) {
                int u = __builtin_ctzll(nb);
                nb &= nb - 1;
                if (!(neighbor_colors[u] & (Mask{1} << c))) {
                    neighbor_colors[u] |= Mask{1} << c;
                    touched.push_back(u);
                }
            }
            if (solve(assigned + 1, std::max(max_used, c))) return true;
            for (int u : touched) neighbor_colors[u] &= ~(Mask{1} << c);
            color[pick] = -1;
        }
        return false;
    }
};

bool k_colorable(const std::vector<Mask>& adj, int k) {
    KColorSearch s(adj, k);
    return s.solve(0, -1);
}

} // namespace

int two_hop_max_clique(const Topology& t) {
    if (t.node_count > 64)
        throw std::invalid_argument("two_hop_max_clique supports at most 64 nodes");
    return max_clique(interference_masks(t));
}

SlotsResult min_slots(const Topology& t) {
    if (t.node_count == 0) throw std::invalid_argument("empty topology");
    if (t.node_count == 1) return {1, true};
    if (t.node_count > kExactColoringLimit) {
        // DSATUR greedy on the two-hop graph, without bitmask limits.
        auto map = two_hop(t);
        std::vector<int> color(t.node_count, -1);
        std::vector<std::set<int>> nb_colors(t.node_count);
        int used = 0;
        for (int step = 0; step < t.node_count; ++step) {
            int pick = -1, pick_sat = -1, pick_deg = -1;
            for (int v = 0; v < t.node_count; ++v) {
                if (color[v] >= 0) continue;
                int sat = static_cast<int>(nb_colors[v].size());
                int deg = static_cast<int>(map[v].size());
                if (sat > pick_sat || (sat == pick_sat && deg > pick_deg)) {
                    pick = v;
                    pick_sat = sat;
                    pick_deg = deg;
                }
            }
            int c = 0;
            while (nb_colors[pick].count(c)) ++c;
            color[pick] = c;
            used = std::max(used, c + 1);
            for (int u : map[pick]) nb_colors[u].insert(c);
        }
        return {used, false};
    }
    auto masks = interference_masks(t);
    int lb = max_clique(masks);
    int ub = dsatur_greedy(masks);
    int k = lb;
    while (k < ub && !k_colorable(masks, k)) ++k;
    return {k, true};
}

} // namespace desync
