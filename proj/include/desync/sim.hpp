#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "desync/protocol.hpp"
#include "desync/topology.hpp"

namespace desync {

struct RunConfig {
    Topology topology;
    ProtocolKind protocol = ProtocolKind::MDwarf;
    double period_ms = 1000.0; // T
    int periods = 300;
    std::uint64_t seed = 1;
    double bitrate_bps = 250000.0;
    ProtocolConfig proto;
    // When non-empty, overrides the seeded uniform initial phases (tests).
    std::vector<double> initial_phases;
};

// Deterministic record of one run. Phase samples are taken on the global
// reference timeline at every period boundary; sample p is the state at the
// end of period p (and thus the phase each node fires at in period p+1).
struct RunTrace {
    int node_count = 0;
    int periods = 0;
    double period_ms = 0.0;
    std::vector<double> initial_phases;            // [node]
    std::vector<std::vector<double>> phases;       // [period][node], in [0, T)
    std::vector<int> collisions;                   // [period] dropped frame deliveries
    std::vector<std::vector<int>> node_collisions; // [period][node] drops at that receiver
    std::vector<long> fires;                       // [node]
    std::vector<long> receives;                    // [node]
};

using ProtocolFactory =
    std::function<std::unique_ptr<Protocol>(int node_id, const ProtocolContext&, Rng)>;

// Run with the protocol selected in the config.
RunTrace run(const RunConfig& cfg);

// Run with custom per-node logic (test hooks).
RunTrace run(const RunConfig& cfg, const ProtocolFactory& factory);

} // namespace desync
