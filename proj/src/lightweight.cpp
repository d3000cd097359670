#include "desync/lightweight.hpp"

#include <algorithm>
#include <cmath>

#include "desync/phase_math.hpp"

namespace desync {

double pick_slot(const std::vector<SlotInterval>& occupied, Rng& rng, double period_ms,
                 double width_ms) {
    // Blocked offsets for each claim [s, s+len): the circular interval
    // (s - width, s + len). Flatten to linear segments in [0, T).
    struct Seg {
        double lo, hi;
    };
    std::vector<Seg> blocked;
    for (const auto& iv : occupied) {
        double lo = mod_pos(iv.start_ms - width_ms, period_ms);
        double len = std::min(width_ms + iv.len_ms, period_ms);
        double hi = lo + len;
        if (hi <= period_ms) {
            blocked.push_back({lo, hi});
        } else {
            blocked.push_back({lo, period_ms});
            blocked.push_back({0.0, hi - period_ms});
        }
    }
    std::sort(blocked.begin(), blocked.end(), [](const Seg& a, const Seg& b) { return a.lo < b.lo; });

    std::vector<Seg> free;
    double cursor = 0.0;
    for (const auto& seg : blocked) {
        if (seg.lo > cursor) free.push_back({cursor, seg.lo});
        cursor = std::max(cursor, seg.hi);
    }
    if (cursor < period_ms) free.push_back({cursor, period_ms});

    double total = 0.0;
    for (const auto& seg : free) total += seg.hi - seg.lo;
    if (total <= 0.0) return rng.uniform(0.0, period_ms); // saturated

    double u = rng.uniform(0.0, total);
    for (const auto& seg : free) {
        double len = seg.hi - seg.lo;
        if (u < len) return seg.lo + u;
        u -= len;
    }
    return free.back().hi - 1e-12; // numerical tail
}

Lightweight::Lightweight(const ProtocolContext& ctx, const LightweightConfig& cfg, Rng rng)
    : ctx_(ctx), table_(ctx.node_count, ctx.node_id, ctx.period_ms), rng_(rng),
      last_fire_ms_(0.0) {
    own_airtime_ = airtime_ms(0, ctx.bitrate_bps); // bare beacons only
    width_ = own_airtime_ + 2.0 * cfg.guard_ms;
}

FiringResult Lightweight::on_fire(double now_ms, double phase_ms) {
    double prev_fire = fired_ ? last_fire_ms_ : now_ms - ctx_.period_ms;
    table_.expire(prev_fire);

    // Conflict since the last firing: a decoded frame overlapped our own
    // transmission, or a one-hop neighbor's known phase sits within the
    // claim width of ours.
    bool conflict = heard_overlap_;
    std::vector<SlotInterval> claims;
    for (const auto& e : table_.phase_view(now_ms)) {
        if (e.hops != 1) continue;
        if (std::abs(e.dphi) < width_) conflict = true;
        claims.push_back({mod_pos(phase_ms + e.dphi, ctx_.period_ms), width_});
    }

    FiringResult result;
    result.payload = std::nullopt;
    result.next_phase_ms =
        conflict ? pick_slot(claims, rng_, ctx_.period_ms, width_) : phase_ms;

    heard_overlap_ = false;
    last_fire_ms_ = now_ms;
    fired_ = true;
    return result;
}

void Lightweight::on_receive(const Frame& frame, double rx_ms, double decode_ms) {
    table_.on_receive(frame, rx_ms, decode_ms);
    if (fired_) {
        double own_end = last_fire_ms_ + own_airtime_;
        if (rx_ms < own_end && frame.end_ms() > last_fire_ms_) heard_overlap_ = true;
    }
}

} // namespace desync
