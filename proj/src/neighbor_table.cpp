#include "desync/neighbor_table.hpp"

#include <cmath>

#include "desync/phase_math.hpp"

namespace desync {

NeighborTable::NeighborTable(int node_count, int self_id, double period_ms)
    : records_(node_count), self_(self_id), period_(period_ms) {
    for (int i = 0; i < node_count; ++i) records_[i].id = i;
}

void NeighborTable::on_receive(const Frame& frame, double rx_ms, double refresh_ms) {
    if (frame.sender < 0 || frame.sender >= static_cast<int>(records_.size())) return;
    if (frame.has_payload) {
        for (const auto& e : frame.entries) {
            if (e.id >= records_.size()) return;           // malformed: ignore frame
            if (e.rel_phase_ms >= period_) return;          // malformed: ignore frame
        }
    }

    NeighborRecord& sender = records_[frame.sender];
    sender.last_fire_ms = rx_ms;
    sender.hops = 1; // direct reception permanently wins over relayed status
    sender.ttl = kRecordTtl;
    sender.last_refresh_ms = refresh_ms;

    if (!frame.has_payload) return;
    for (const auto& e : frame.entries) {
        if (e.id == self_) continue;
        NeighborRecord& rec = records_[e.id];
        rec.last_fire_ms = rx_ms - static_cast<double>(e.rel_phase_ms);
        rec.hops = rec.hops == 1 ? 1 : 2;
        rec.ttl = kRecordTtl;
        rec.last_refresh_ms = refresh_ms;
    }
}

void NeighborTable::expire(double prev_fire_ms) {
    for (auto& rec : records_) {
        if (rec.ttl <= 0) continue;
        if (rec.last_refresh_ms > prev_fire_ms) continue; // refreshed this period
        if (--rec.ttl == 0) rec.hops = 0;
    }
}

std::vector<ViewEntry> NeighborTable::phase_view(double now_ms) const {
    std::vector<ViewEntry> view;
    view.reserve(records_.size());
    for (const auto& rec : records_) {
        if (rec.ttl <= 0) continue;
        double dphi = wrap_signed(rec.last_fire_ms - now_ms, period_);
        view.push_back({rec.id, rec.hops, dphi});
    }
    return view;
}

std::vector<PayloadEntry> NeighborTable::payload_entries(double own_fire_ms) const {
    std::vector<PayloadEntry> entries;
    for (const auto& rec : records_) {
        if (rec.ttl <= 0 || rec.hops != 1) continue;
        double rel = mod_pos(own_fire_ms - rec.last_fire_ms, period_);
        double q = std::round(rel);
        if (q >= period_) q = 0.0; // wraps back to phase zero
        entries.push_back({static_cast<std::uint16_t>(rec.id), static_cast<std::uint16_t>(q)});
    }
    return entries;
}

int NeighborTable::live_count() const {
    int n = 0;
    for (const auto& rec : records_)
        if (rec.ttl > 0) ++n;
    return n;
}

const NeighborRecord* NeighborTable::find(int id) const {
    if (id < 0 || id >= static_cast<int>(records_.size())) return nullptr;
    const NeighborRecord& rec = records_[id];
    return rec.ttl > 0 ? &rec : nullptr;
}

} // namespace desync
