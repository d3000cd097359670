#pragma once

#include <vector>

#include "desync/neighbor_table.hpp"
#include "desync/protocol.hpp"
#include "desync/rng.hpp"

namespace desync {

// A claimed transmission window on the period circle.
struct SlotInterval {
    double start_ms = 0.0;
    double len_ms = 0.0;
};

// Draw a slot offset uniformly from the free part of the period: the circle
// minus every occupied interval inflated backward by the claimant width
// (so [offset, offset+width) clears them all). Falls back to uniform over
// [0, T) when nothing is free.
double pick_slot(const std::vector<SlotInterval>& occupied, Rng& rng, double period_ms,
                 double width_ms);

class Lightweight : public Protocol {
public:
    Lightweight(const ProtocolContext& ctx, const LightweightConfig& cfg, Rng rng);

    FiringResult on_fire(double now_ms, double phase_ms) override;
    void on_receive(const Frame& frame, double rx_ms, double decode_ms) override;

    // Claim width: own frame airtime plus a guard on each side.
    double width_ms() const { return width_; }

    const NeighborTable& table() const { return table_; }

private:
    ProtocolContext ctx_;
    NeighborTable table_;
    Rng rng_;
    double width_ = 0.0;
    double own_airtime_ = 0.0;
    double last_fire_ms_;
    bool fired_ = false;
    bool heard_overlap_ = false; // a decoded frame overlapped our own airtime
};

} // namespace desync
