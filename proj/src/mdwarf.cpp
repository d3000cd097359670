#include "desync/mdwarf.hpp"

#include <algorithm>
#include <cmath>

#include "desync/phase_math.hpp"

namespace desync {

double repulsive_force(double dphi, double period_ms, double eps_min_ms, double taper_frac) {
    double mag_dphi = std::abs(dphi);
    if (mag_dphi < eps_min_ms) mag_dphi = eps_min_ms;
    double half = period_ms * 0.5;
    double magnitude = period_ms / mag_dphi;
    double edge = half - taper_frac * period_ms;
    if (mag_dphi > edge) {
        double scale = (half - mag_dphi) / (half - edge);
        magnitude *= std::max(0.0, scale);
    }
    return dphi >= 0.0 ? -magnitude : magnitude;
}

std::vector<ForceContribution> absorb_forces(const std::vector<ViewEntry>& view,
                                             double period_ms, double eps_abs_ms,
                                             double eps_min_ms, int self_id) {
    // Split per side, keyed by |dphi|. Entries exactly at zero are assigned a
    // side by id so two coincident nodes repel instead of deadlocking.
    struct Keyed {
        double mag;
        double dphi;
        int id;
    };
    std::vector<Keyed> ahead, behind;
    for (const auto& e : view) {
        double d = e.dphi;
        if (d == 0.0) d = e.id > self_id ? eps_min_ms : -eps_min_ms;
        Keyed k{std::abs(d), d, e.id};
        (d > 0.0 ? ahead : behind).push_back(k);
    }
    auto by_distance = [](const Keyed& a, const Keyed& b) {
        return a.mag != b.mag ? a.mag < b.mag : a.id < b.id;
    };
    std::sort(ahead.begin(), ahead.end(), by_distance);
    std::sort(behind.begin(), behind.end(), by_distance);

    std::vector<ForceContribution> out;
    out.reserve(view.size());
    auto emit_side = [&](const std::vector<Keyed>& side) {
        double cluster_edge = 0.0;
        bool open = false;
        for (const auto& k : side) {
            // single-link clustering on |dphi|: a new cluster starts when the
            // gap to the previous entry exceeds eps_abs
            bool absorbed = open && (k.mag - cluster_edge) <= eps_abs_ms;
            cluster_edge = k.mag;
            open = true;
            double f = absorbed ? 0.0 : repulsive_force(k.dphi, period_ms, eps_min_ms);
            out.push_back({k.id, k.dphi, f, absorbed});
        }
    };
    emit_side(ahead);
    emit_side(behind);
    std::sort(out.begin(), out.end(),
              [](const ForceContribution& a, const ForceContribution& b) { return a.id < b.id; });
    return out;
}

double total_force(const std::vector<ForceContribution>& contributions) {
    double sum = 0.0;
    for (const auto& c : contributions) sum += c.force;
    return sum;
}

double mdwarf_gain(const MdwarfConfig& cfg, int view_size) {
    return cfg.c1 * std::pow(static_cast<double>(view_size) + 1.0, -cfg.c2);
}

MDwarf::MDwarf(const ProtocolContext& ctx, const MdwarfConfig& cfg, int beta)
    : ctx_(ctx), cfg_(cfg), table_(ctx.node_count, ctx.node_id, ctx.period_ms), policy_(beta),
      last_fire_ms_(0.0) {}

FiringResult MDwarf::on_fire(double now_ms, double phase_ms) {
    double prev_fire = fired_ ? last_fire_ms_ : now_ms - ctx_.period_ms;
    table_.expire(prev_fire);

    FiringResult result;
    if (policy_.should_attach()) result.payload = table_.payload_entries(now_ms);

    auto view = table_.phase_view(now_ms);
    if (view.empty()) {
        result.next_phase_ms = phase_ms;
    } else {
        double eps_abs = cfg_.eps_abs_frac * ctx_.period_ms;
        double eps_min = cfg_.eps_min_frac * ctx_.period_ms;
        auto forces = absorb_forces(view, ctx_.period_ms, eps_abs, eps_min, ctx_.node_id);
        double gain = mdwarf_gain(cfg_, static_cast<int>(view.size()));
        double jump = gain * ctx_.period_ms * total_force(forces);
        result.next_phase_ms = mod_pos(phase_ms + jump, ctx_.period_ms);
    }

    last_fire_ms_ = now_ms;
    fired_ = true;
    return result;
}

void MDwarf::on_receive(const Frame& frame, double rx_ms, double decode_ms) {
    table_.on_receive(frame, rx_ms, decode_ms);
}

} // namespace desync
