#pragma once

#include <optional>
#include <vector>

#include "desync/frame.hpp"

namespace desync {

inline constexpr int kRecordTtl = 3; // periods a record survives without refresh

// A node's belief about one neighbor.
struct NeighborRecord {
    int id = -1;
    double last_fire_ms = 0.0;    // on the local observation timeline
    int hops = 0;                 // 1 = heard directly, 2 = learned via relay
    int ttl = 0;                  // 0 means absent
    double last_refresh_ms = 0.0; // reception that last touched this record
};

// One live record per id projected onto the firing circle.
struct ViewEntry {
    int id = -1;
    int hops = 0;
    double dphi = 0.0; // signed offset from own firing, in [-T/2, T/2)
};

// Schedule for attaching the relayed-phase payload: attach on every
// (beta + 1)-th firing, starting with the first.
class RelayPolicy {
public:
    explicit RelayPolicy(int beta) : beta_(beta) {}

    int beta() const { return beta_; }

    // Call exactly once per own firing.
    bool should_attach() {
        bool attach = fire_counter_ % (static_cast<long>(beta_) + 1) == 0;
        ++fire_counter_;
        return attach;
    }

private:
    int beta_ = 0;
    long fire_counter_ = 0;
};

// Phase table shared by all protocols: direct observations, relayed
// two-hop entries, and per-period TTL expiry.
class NeighborTable {
public:
    NeighborTable(int node_count, int self_id, double period_ms);

    // Record a delivered frame. rx_ms is the frame emission time (zero
    // propagation delay); refresh_ms is when decoding completed, which is
    // what TTL freshness is judged against. Malformed payloads (bad id,
    // relative phase outside [0, T)) cause the frame to be ignored.
    void on_receive(const Frame& frame, double rx_ms, double refresh_ms);

    // Age records over the elapsed period (prev own firing, now]. Records
    // not refreshed in that window lose one TTL; at zero they are removed.
    void expire(double prev_fire_ms);

    // Signed circular offsets of all live records relative to an own firing
    // at now_ms, ordered by id.
    std::vector<ViewEntry> phase_view(double now_ms) const;

    // Relative phases of all live hop-1 records as seen from an own firing
    // at now_ms, quantized to 1 ms for the 2-byte wire encoding.
    std::vector<PayloadEntry> payload_entries(double own_fire_ms) const;

    int live_count() const;
    const NeighborRecord* find(int id) const; // nullptr when absent

private:
    std::vector<NeighborRecord> records_; // indexed by node id
    int self_ = -1;
    double period_ = 0.0;
};

} // namespace desync
