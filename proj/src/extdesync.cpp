#include "desync/extdesync.hpp"

#include "desync/phase_math.hpp"

namespace desync {

std::optional<PhaseNeighbors> phase_neighbors(const std::vector<ViewEntry>& view,
                                              double period_ms) {
    if (view.empty()) return std::nullopt;
    PhaseNeighbors pn;
    double best_fwd = -1.0, best_bwd = -1.0;
    for (const auto& e : view) {
        double fwd = e.dphi > 0.0 ? e.dphi : e.dphi + period_ms;
        if (fwd <= 0.0) fwd = period_ms; // coincident entry
        double bwd = e.dphi < 0.0 ? -e.dphi : period_ms - e.dphi;
        if (bwd <= 0.0) bwd = period_ms;
        if (best_fwd < 0.0 || fwd < best_fwd ||
            (fwd == best_fwd && e.id < pn.next.id)) {
            pn.next = e;
            best_fwd = fwd;
        }
        if (best_bwd < 0.0 || bwd < best_bwd ||
            (bwd == best_bwd && e.id < pn.prev.id)) {
            pn.prev = e;
            best_bwd = bwd;
        }
    }
    pn.dist_next = best_fwd;
    pn.dist_prev = best_bwd;
    return pn;
}

ExtDesync::ExtDesync(const ProtocolContext& ctx, const ExtDesyncConfig& cfg, int beta)
    : ctx_(ctx), cfg_(cfg), table_(ctx.node_count, ctx.node_id, ctx.period_ms), policy_(beta),
      last_fire_ms_(0.0) {}

FiringResult ExtDesync::on_fire(double now_ms, double phase_ms) {
    double prev_fire = fired_ ? last_fire_ms_ : now_ms - ctx_.period_ms;
    table_.expire(prev_fire);

    FiringResult result;
    if (policy_.should_attach()) result.payload = table_.payload_entries(now_ms);

    auto view = table_.phase_view(now_ms);
    auto pn = phase_neighbors(view, ctx_.period_ms);
    if (!pn) {
        result.next_phase_ms = phase_ms;
    } else {
        // Move toward the circular midpoint of prev and next.
        double offset = cfg_.alpha * (pn->dist_next - pn->dist_prev) * 0.5;
        result.next_phase_ms = mod_pos(phase_ms + offset, ctx_.period_ms);
    }

    last_fire_ms_ = now_ms;
    fired_ = true;
    return result;
}

void ExtDesync::on_receive(const Frame& frame, double rx_ms, double decode_ms) {
    table_.on_receive(frame, rx_ms, decode_ms);
}

} // namespace desync
