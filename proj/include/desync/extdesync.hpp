#pragma once

#include <optional>

#include "desync/neighbor_table.hpp"
#include "desync/protocol.hpp"

namespace desync {

// Previous and next phase neighbor of an observer, with circular distances.
// Distances are in (0, T]: an entry exactly coincident with the observer is
// a full period away in both directions (it just fired together with us).
struct PhaseNeighbors {
    ViewEntry prev;
    ViewEntry next;
    double dist_prev = 0.0; // backward distance to prev
    double dist_next = 0.0; // forward distance to next
};

// Nearest neighbors on each side of the firing circle; ties broken by the
// lower node id. Empty view yields nullopt (no-op signal).
std::optional<PhaseNeighbors> phase_neighbors(const std::vector<ViewEntry>& view,
                                              double period_ms);

class ExtDesync : public Protocol {
public:
    ExtDesync(const ProtocolContext& ctx, const ExtDesyncConfig& cfg, int beta);

    FiringResult on_fire(double now_ms, double phase_ms) override;
    void on_receive(const Frame& frame, double rx_ms, double decode_ms) override;

    const NeighborTable& table() const { return table_; }

private:
    ProtocolContext ctx_;
    ExtDesyncConfig cfg_;
    NeighborTable table_;
    RelayPolicy policy_;
    double last_fire_ms_;
    bool fired_ = false;
};

} // namespace desync
